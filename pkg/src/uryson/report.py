"""Deterministic report serialization.

Reports are rendered to JSON text by a small custom emitter rather than
``json.dumps`` so the output is byte-stable across platforms and Python
versions: keys are sorted, floats are printed with 12 significant digits,
``-0.0`` is normalized to ``0.0``, and non-finite numbers are rejected
outright (a report containing NaN is a bug upstream, not a formatting
problem).
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

from .lattice import Mask, Vector

__all__ = ["format_float", "jsonable", "dumps", "csv_table"]


def format_float(x: float) -> str:
    """Render a float with 12 significant digits, ``-0.0`` as ``0``."""
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite value in report")
    if x == 0.0:
        return "0"
    s = format(float(x), ".12g")
    # ".12g" may emit bare exponents like "1e-09"; that is fine for JSON.
    return s


def jsonable(obj: Any) -> Any:
    """Translate domain objects into plain JSON-ready primitives."""
    if isinstance(obj, Vector):
        return [float(c) for c in obj.coords]
    if isinstance(obj, Mask):
        return sorted(obj.indices())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj: Any, out: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad_in)
            _emit(v, out, indent, level + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        keys = sorted(obj)
        out.append("{\n")
        for i, k in enumerate(keys):
            if not isinstance(k, str):
                raise TypeError("report keys must be strings")
            out.append(pad_in + json.dumps(k, ensure_ascii=True) + ": ")
            _emit(obj[k], out, indent, level + 1)
            out.append(",\n" if i + 1 < len(keys) else "\n")
        out.append(pad + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, *, indent: int = 2) -> str:
    """Canonical JSON text: sorted keys, ``.12g`` floats, trailing newline."""
    out: list[str] = []
    _emit(jsonable(obj), out, indent, 0)
    out.append("\n")
    return "".join(out)


def csv_table(header: list[str], rows: list[list[Any]]) -> str:
    """Render a table as CSV text with ``\\n`` line endings.

    Floats go through the same 12-significant-digit formatting as the JSON
    path so the two outputs never disagree on a value.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(v) if isinstance(v, float) else v for v in row]
        )
    return buf.getvalue()
