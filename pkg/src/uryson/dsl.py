"""Model files: a small line-oriented language for kernels, operators, probes.

One construct per line; ``#`` starts a comment.  Names must be declared before
they are used.  The directives:

    space E 2                     input dimension (E) / output dimension (F)
    space F 2
    kernel NAME pwl (-1,1) (0,0) (1,1)
    kernel NAME abs|id|relu [scale=NUM]
    kernel NAME clamp(LO,HI) [scale=NUM]
    op NAME MxN [k11 k12; k21 k22]
    op NAME rank1 PHI u=(1,1)
    op NAME integral (EXPR) s=(...) t=(...) w=(...)
    probe NAME = (1,-2)
    set KEY VALUE

``EXPR`` is an arithmetic expression in the variables ``s``, ``t``, ``r``
with ``+ - * / ^`` and the functions abs, min, max, exp, sin, cos.
``set`` keys: tol, eps0, factor, max_steps, cap_support, cap_masks, seed.

Tokenization failures and malformed lines raise ModelSyntaxError with
line/column; violations of model invariants (unknown or duplicate names,
dimension disagreements, kernels that do not vanish at 0, bad grids) raise
ModelSemanticError with the line.  ``parse_model`` -> ``render`` -> ``parse_model``
is the identity on models.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

from .errors import (
    BadCommand,
    KernelEvalError,
    ModelSemanticError,
    ModelSyntaxError,
)
from .kernels import BuiltinKernel, PwlKernel, ScalarKernel
from .lattice import DEFAULT_SUPPORT_CAP, DEFAULT_TOL, Vector
from .operators import (
    IntegralKernelSpec,
    KernelOperator,
    discretize_integral,
    rank_one,
)
from .projections import DEFAULT_MASK_CAP, EpsSchedule

__all__ = [
    "Settings",
    "MatrixOpDef",
    "RankOneOpDef",
    "IntegralOpDef",
    "Model",
    "parse_model",
    "render",
    "build_operator",
    "eval_expr",
    "render_expr",
]


# --------------------------------------------------------------------------
# tokens

_TOKEN_RES = (
    ("DIM", re.compile(r"\d+x\d+(?![\w.])")),
    ("NUM", re.compile(r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")),
    ("NAME", re.compile(r"[A-Za-z_][A-Za-z0-9_]*")),
    ("PUNCT", re.compile(r"[()\[\];,=+\-*/^]")),
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize_line(raw: str, lineno: int) -> list[_Token]:
    toks: list[_Token] = []
    pos = 0
    while pos < len(raw):
        ch = raw[pos]
        if ch == "#":
            break
        if ch in " \t\r":
            pos += 1
            continue
        for kind, rx in _TOKEN_RES:
            m = rx.match(raw, pos)
            if m:
                toks.append(_Token(kind, m.group(), lineno, pos + 1))
                pos = m.end()
                break
        else:
            raise ModelSyntaxError(f"unexpected character {ch!r}", lineno, pos + 1)
    return toks


class _Cursor:
    def __init__(self, toks: list[_Token], lineno: int, line_len: int):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.end_col = (toks[-1].col + len(toks[-1].text)) if toks else line_len + 1

    def peek(self, ahead: int = 0) -> _Token | None:
        j = self.i + ahead
        return self.toks[j] if j < len(self.toks) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ModelSyntaxError("unexpected end of line", self.lineno, self.end_col)
        self.i += 1
        return tok

    def error(self, message: str) -> ModelSyntaxError:
        tok = self.peek()
        col = tok.col if tok else self.end_col
        return ModelSyntaxError(message, self.lineno, col)

    def expect_punct(self, ch: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != "PUNCT" or tok.text != ch:
            raise self.error(f"expected {ch!r}")
        return self.take()

    def expect_name(self, what: str = "a name") -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != "NAME":
            raise self.error(f"expected {what}")
        return self.take()

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "PUNCT" and tok.text == ch

    def require_end(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected trailing token {tok.text!r}")

    # literals ------------------------------------------------------------

    def number(self) -> float:
        sign = 1.0
        if self.at_punct("-"):
            self.take()
            sign = -1.0
        tok = self.peek()
        if tok is None or tok.kind != "NUM":
            raise self.error("expected a number")
        self.take()
        return sign * float(tok.text)

    def integer(self, what: str) -> int:
        v = self.number()
        if v != int(v):
            raise ModelSemanticError(f"{what} must be an integer", self.lineno)
        return int(v)

    def vector_literal(self) -> tuple[float, ...]:
        self.expect_punct("(")
        vals = [self.number()]
        while self.at_punct(","):
            self.take()
            vals.append(self.number())
        self.expect_punct(")")
        return tuple(vals)


# --------------------------------------------------------------------------
# expressions over s, t, r

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple["Expr", ...]


Expr = Union[Num, Var, Neg, Bin, Call]

_EXPR_VARS = ("s", "t", "r")
_EXPR_FUNCS = {"abs": 1, "min": 2, "max": 2, "exp": 1, "sin": 1, "cos": 1}


def _parse_expr(cur: _Cursor) -> Expr:
    node = _parse_term(cur)
    while cur.at_punct("+") or cur.at_punct("-"):
        op = cur.take().text
        node = Bin(op, node, _parse_term(cur))
    return node


def _parse_term(cur: _Cursor) -> Expr:
    node = _parse_factor(cur)
    while cur.at_punct("*") or cur.at_punct("/"):
        op = cur.take().text
        node = Bin(op, node, _parse_factor(cur))
    return node


def _parse_factor(cur: _Cursor) -> Expr:
    if cur.at_punct("-"):
        cur.take()
        return Neg(_parse_factor(cur))
    return _parse_power(cur)


def _parse_power(cur: _Cursor) -> Expr:
    node = _parse_atom(cur)
    if cur.at_punct("^"):
        cur.take()
        return Bin("^", node, _parse_factor(cur))
    return node


def _parse_atom(cur: _Cursor) -> Expr:
    tok = cur.peek()
    if tok is None:
        raise cur.error("expected an expression")
    if tok.kind == "NUM":
        cur.take()
        return Num(float(tok.text))
    if tok.kind == "NAME":
        cur.take()
        if cur.at_punct("("):
            arity = _EXPR_FUNCS.get(tok.text)
            if arity is None:
                raise ModelSemanticError(
                    f"unknown function {tok.text!r}", cur.lineno, code="unknown_name"
                )
            cur.take()
            args = [_parse_expr(cur)]
            while cur.at_punct(","):
                cur.take()
                args.append(_parse_expr(cur))
            cur.expect_punct(")")
            if len(args) != arity:
                raise ModelSemanticError(
                    f"{tok.text} takes {arity} argument(s)", cur.lineno
                )
            return Call(tok.text, tuple(args))
        if tok.text not in _EXPR_VARS:
            raise ModelSemanticError(
                f"unknown variable {tok.text!r} (expected s, t, or r)",
                cur.lineno,
                code="unknown_name",
            )
        return Var(tok.text)
    if cur.at_punct("("):
        cur.take()
        node = _parse_expr(cur)
        cur.expect_punct(")")
        return node
    raise cur.error(f"unexpected token {tok.text!r} in expression")


def eval_expr(e: Expr, s: float, t: float, r: float) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return {"s": s, "t": t, "r": r}[e.name]
    if isinstance(e, Neg):
        return -eval_expr(e.arg, s, t, r)
    if isinstance(e, Bin):
        a = eval_expr(e.left, s, t, r)
        b = eval_expr(e.right, s, t, r)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            return a / b
        return math.pow(a, b)
    args = [eval_expr(a, s, t, r) for a in e.args]
    if e.fn == "abs":
        return abs(args[0])
    if e.fn == "min":
        return min(args)
    if e.fn == "max":
        return max(args)
    return getattr(math, e.fn)(args[0])


def _num_text(x: float) -> str:
    """Exact round-trip rendering (repr is shortest-exact for doubles)."""
    return repr(float(x))


def render_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return _num_text(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{render_expr(e.arg)})"
    if isinstance(e, Bin):
        return f"({render_expr(e.left)}{e.op}{render_expr(e.right)})"
    return f"{e.fn}({','.join(render_expr(a) for a in e.args)})"


def _expr_fn(expr: Expr) -> Callable[[float, float, float], float]:
    def fn(s: float, t: float, r: float) -> float:
        try:
            return float(eval_expr(expr, s, t, r))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise KernelEvalError(
                f"kernel expression failed to evaluate at "
                f"(s={s:g}, t={t:g}, r={r:g}): {exc}"
            ) from exc

    return fn


# --------------------------------------------------------------------------
# model

@dataclass(frozen=True)
class Settings:
    tol: float = DEFAULT_TOL
    eps0: float = 1.0
    factor: float = 0.5
    max_steps: int = 40
    cap_support: int = DEFAULT_SUPPORT_CAP
    cap_masks: int = DEFAULT_MASK_CAP
    seed: int = 0

    def schedule(self) -> EpsSchedule:
        return EpsSchedule(self.eps0, self.factor, self.max_steps)


@dataclass(frozen=True)
class MatrixOpDef:
    name: str
    shape: tuple[int, int]  # (m, n) = rows x columns
    rows: tuple[tuple[str, ...], ...]  # kernel names


@dataclass(frozen=True)
class RankOneOpDef:
    name: str
    phi: str
    u: tuple[float, ...]


@dataclass(frozen=True)
class IntegralOpDef:
    name: str
    expr: Expr
    s_grid: tuple[float, ...]
    t_grid: tuple[float, ...]
    weights: tuple[float, ...]


OpDef = Union[MatrixOpDef, RankOneOpDef, IntegralOpDef]


@dataclass(frozen=True)
class Model:
    dims: tuple[int, int]  # (n, m)
    kernels: tuple[tuple[str, ScalarKernel], ...]
    operators: tuple[OpDef, ...]
    probes: tuple[tuple[str, Vector], ...]
    settings: Settings

    @property
    def n(self) -> int:
        return self.dims[0]

    @property
    def m(self) -> int:
        return self.dims[1]

    def kernel(self, name: str) -> ScalarKernel:
        for k, v in self.kernels:
            if k == name:
                return v
        raise BadCommand(f"unknown kernel {name!r}")

    def operator_def(self, name: str) -> OpDef:
        for d in self.operators:
            if d.name == name:
                return d
        raise BadCommand(f"unknown operator {name!r}")

    def probe(self, name: str) -> Vector:
        for k, v in self.probes:
            if k == name:
                return v
        raise BadCommand(f"unknown probe {name!r}")

    def operator_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.operators)

    def probe_names(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.probes)


def op_shape(model_or_defs, name: str) -> tuple[int, int]:
    """(m, n) of a declared operator (resolving rank-one factors)."""
    defs = (
        model_or_defs.operators
        if isinstance(model_or_defs, Model)
        else tuple(model_or_defs)
    )
    by_name = {d.name: d for d in defs}
    d = by_name[name]
    if isinstance(d, MatrixOpDef):
        return d.shape
    if isinstance(d, RankOneOpDef):
        return (len(d.u), op_shape(defs, d.phi)[1])
    return (len(d.s_grid), len(d.t_grid))


def build_operator(model: Model, name: str) -> KernelOperator:
    d = model.operator_def(name)
    if isinstance(d, MatrixOpDef):
        return KernelOperator(
            tuple(tuple(model.kernel(k) for k in row) for row in d.rows)
        )
    if isinstance(d, RankOneOpDef):
        return rank_one(
            build_operator(model, d.phi), Vector(d.u), tol=model.settings.tol
        )
    spec = IntegralKernelSpec(_expr_fn(d.expr), d.s_grid, d.t_grid, d.weights)
    return discretize_integral(spec, tol=model.settings.tol)


# --------------------------------------------------------------------------
# parsing

_SETTING_KEYS = ("tol", "eps0", "factor", "max_steps", "cap_support", "cap_masks", "seed")
_INT_SETTINGS = ("max_steps", "cap_support", "cap_masks", "seed")


def _check_setting(key: str, value: float, lineno: int) -> float | int:
    if key in _INT_SETTINGS:
        if value != int(value):
            raise ModelSemanticError(f"setting {key} must be an integer", lineno)
        iv = int(value)
        if key != "seed" and iv < 1:
            raise ModelSemanticError(f"setting {key} must be >= 1", lineno)
        return iv
    if key in ("tol", "eps0") and value <= 0.0:
        raise ModelSemanticError(f"setting {key} must be positive", lineno)
    if key == "factor" and not (0.0 < value < 1.0):
        raise ModelSemanticError("setting factor must lie strictly in (0,1)", lineno)
    return value


def parse_model(text: str) -> Model:
    spaces: dict[str, int] = {}
    space_lines: dict[str, int] = {}
    kernels: list[tuple[str, ScalarKernel]] = []
    kernel_map: dict[str, ScalarKernel] = {}
    operators: list[OpDef] = []
    def_lines: dict[str, int] = {}
    probes: list[tuple[str, Vector]] = []
    setting_values: dict[str, float | int] = {}
    setting_lines: dict[str, int] = {}
    claimed: dict[str, int] = {}

    def claim(name: str, lineno: int) -> None:
        if name in claimed:
            raise ModelSemanticError(
                f"duplicate name {name!r} (first declared on line {claimed[name]})",
                lineno,
            )
        claimed[name] = lineno

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokenize_line(raw, lineno)
        if not toks:
            continue
        cur = _Cursor(toks, lineno, len(raw))
        head = cur.expect_name("a directive")

        if head.text == "space":
            which = cur.expect_name("E or F").text
            if which not in ("E", "F"):
                raise ModelSemanticError(
                    f"space must be E (input) or F (output), got {which!r}", lineno
                )
            if which in spaces:
                raise ModelSemanticError(f"duplicate space {which}", lineno)
            dim = cur.integer("space dimension")
            if dim < 1:
                raise ModelSemanticError("space dimension must be >= 1", lineno)
            spaces[which] = dim
            space_lines[which] = lineno
            cur.require_end()

        elif head.text == "kernel":
            name = cur.expect_name("a kernel name").text
            claim(name, lineno)
            form = cur.expect_name("a kernel form").text
            try:
                if form == "pwl":
                    pts = []
                    while cur.at_punct("("):
                        cur.take()
                        px = cur.number()
                        cur.expect_punct(",")
                        py = cur.number()
                        cur.expect_punct(")")
                        pts.append((px, py))
                    if not pts:
                        raise cur.error("expected at least one (x,y) breakpoint")
                    scale = _parse_scale_opt(cur)
                    kern: ScalarKernel = PwlKernel(tuple(pts))
                    if scale != 1.0:
                        kern = kern.scaled(scale)
                elif form in ("abs", "id", "relu"):
                    scale = _parse_scale_opt(cur)
                    kern = BuiltinKernel(form, scale)
                elif form == "clamp":
                    cur.expect_punct("(")
                    lo = cur.number()
                    cur.expect_punct(",")
                    hi = cur.number()
                    cur.expect_punct(")")
                    scale = _parse_scale_opt(cur)
                    kern = BuiltinKernel("clamp", scale, (lo, hi))
                else:
                    raise ModelSemanticError(
                        f"unknown kernel form {form!r}", lineno
                    )
            except ValueError as exc:
                raise ModelSemanticError(str(exc), lineno) from exc
            cur.require_end()
            kernels.append((name, kern))
            kernel_map[name] = kern

        elif head.text == "op":
            name = cur.expect_name("an operator name").text
            claim(name, lineno)
            def_lines[name] = lineno
            tok = cur.peek()
            if tok is not None and tok.kind == "DIM":
                cur.take()
                m_str, n_str = tok.text.split("x")
                shape = (int(m_str), int(n_str))
                if shape[0] < 1 or shape[1] < 1:
                    raise ModelSemanticError(
                        "operator dimensions must be >= 1", lineno
                    )
                cur.expect_punct("[")
                rows: list[tuple[str, ...]] = []
                row: list[str] = []
                while True:
                    t2 = cur.peek()
                    if t2 is None:
                        raise cur.error("expected ']'")
                    if t2.kind == "NAME":
                        cur.take()
                        if t2.text not in kernel_map:
                            raise ModelSemanticError(
                                f"unknown kernel {t2.text!r}",
                                lineno,
                                code="unknown_name",
                            )
                        row.append(t2.text)
                    elif cur.at_punct(";"):
                        cur.take()
                        rows.append(tuple(row))
                        row = []
                    elif cur.at_punct("]"):
                        cur.take()
                        rows.append(tuple(row))
                        break
                    else:
                        raise cur.error(f"unexpected token {t2.text!r} in matrix")
                cur.require_end()
                if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
                    raise ModelSemanticError(
                        f"matrix for {name!r} must have {shape[0]} row(s) of "
                        f"{shape[1]} kernel(s)",
                        lineno,
                        code="dimension_mismatch",
                    )
                operators.append(MatrixOpDef(name, shape, tuple(rows)))
            elif tok is not None and tok.kind == "NAME" and tok.text == "rank1":
                cur.take()
                phi = cur.expect_name("a functional name").text
                if phi not in {d.name for d in operators}:
                    raise ModelSemanticError(
                        f"unknown operator {phi!r}", lineno, code="unknown_name"
                    )
                if op_shape(operators, phi)[0] != 1:
                    raise ModelSemanticError(
                        f"rank-one factor {phi!r} must be a functional (one row)",
                        lineno,
                    )
                key = cur.expect_name("u=(...)")
                if key.text != "u":
                    raise ModelSyntaxError("expected u=(...)", lineno, key.col)
                cur.expect_punct("=")
                u = cur.vector_literal()
                cur.require_end()
                if any(c < 0.0 for c in u):
                    raise ModelSemanticError(
                        "rank-one direction u must be nonnegative",
                        lineno,
                        code="negative_u",
                    )
                operators.append(RankOneOpDef(name, phi, u))
            elif tok is not None and tok.kind == "NAME" and tok.text == "integral":
                cur.take()
                cur.expect_punct("(")
                expr = _parse_expr(cur)
                cur.expect_punct(")")
                grids: dict[str, tuple[float, ...]] = {}
                for want in ("s", "t", "w"):
                    key = cur.expect_name(f"{want}=(...)")
                    if key.text != want:
                        raise ModelSyntaxError(
                            f"expected {want}=(...)", lineno, key.col
                        )
                    cur.expect_punct("=")
                    grids[want] = cur.vector_literal()
                cur.require_end()
                if len(grids["w"]) != len(grids["t"]):
                    raise ModelSemanticError(
                        "one weight per input node required",
                        lineno,
                        code="dimension_mismatch",
                    )
                if any(w <= 0.0 for w in grids["w"]):
                    raise ModelSemanticError(
                        "quadrature weights must be strictly positive", lineno
                    )
                for s_node in grids["s"]:
                    for t_node in grids["t"]:
                        try:
                            v0 = eval_expr(expr, s_node, t_node, 0.0)
                        except (ValueError, ZeroDivisionError, OverflowError) as exc:
                            raise ModelSemanticError(
                                f"kernel expression failed to evaluate at node "
                                f"(s={s_node:g}, t={t_node:g}): {exc}",
                                lineno,
                            ) from exc
                        if abs(v0) > DEFAULT_TOL:
                            raise ModelSemanticError(
                                f"kernel does not vanish at 0 at node "
                                f"(s={s_node:g}, t={t_node:g})",
                                lineno,
                                code="c0_violation",
                            )
                operators.append(
                    IntegralOpDef(name, expr, grids["s"], grids["t"], grids["w"])
                )
            else:
                raise cur.error("expected MxN, rank1, or integral")

        elif head.text == "probe":
            name = cur.expect_name("a probe name").text
            claim(name, lineno)
            def_lines[name] = lineno
            cur.expect_punct("=")
            coords = cur.vector_literal()
            cur.require_end()
            probes.append((name, Vector(coords)))

        elif head.text == "set":
            key = cur.expect_name("a setting key").text
            if key not in _SETTING_KEYS:
                raise ModelSemanticError(f"unknown setting {key!r}", lineno)
            if key in setting_values:
                raise ModelSemanticError(f"duplicate setting {key!r}", lineno)
            value = cur.number()
            cur.require_end()
            setting_values[key] = _check_setting(key, value, lineno)
            setting_lines[key] = lineno

        else:
            raise ModelSyntaxError(
                f"unknown directive {head.text!r}", lineno, head.col
            )

    return _finish_model(
        spaces, space_lines, kernels, operators, def_lines, probes, setting_values
    )


def _parse_scale_opt(cur: _Cursor) -> float:
    tok = cur.peek()
    if tok is not None and tok.kind == "NAME" and tok.text == "scale":
        cur.take()
        cur.expect_punct("=")
        return cur.number()
    return 1.0


def _finish_model(
    spaces: dict[str, int],
    space_lines: dict[str, int],
    kernels: list[tuple[str, ScalarKernel]],
    operators: list[OpDef],
    def_lines: dict[str, int],
    probes: list[tuple[str, Vector]],
    setting_values: dict[str, float | int],
) -> Model:
    """Cross-line checks: dimension agreement and inference."""
    n = spaces.get("E")
    m = spaces.get("F")

    for d in operators:
        m_op, n_op = op_shape(operators, d.name)
        line = def_lines[d.name]
        if n is None:
            n = n_op
        elif n_op != n:
            raise ModelSemanticError(
                f"operator {d.name!r} has input dimension {n_op}, expected {n}",
                line,
                code="dimension_mismatch",
            )
        if m_op != 1:  # one-row operators are functionals; always admissible
            if m is None:
                m = m_op
            elif m_op != m:
                raise ModelSemanticError(
                    f"operator {d.name!r} has output dimension {m_op}, "
                    f"expected {m}",
                    line,
                    code="dimension_mismatch",
                )

    for name, v in probes:
        if n is None:
            n = v.dim
        elif v.dim != n:
            raise ModelSemanticError(
                f"probe {name!r} has dimension {v.dim}, expected {n}",
                def_lines[name],
                code="dimension_mismatch",
            )

    if n is None:
        raise ModelSemanticError(
            "model declares no dimensions (add a space, operator, or probe)", 1
        )
    if m is None:
        m = 1 if any(op_shape(operators, d.name)[0] == 1 for d in operators) else n

    return Model(
        dims=(n, m),
        kernels=tuple(kernels),
        operators=tuple(operators),
        probes=tuple(probes),
        settings=Settings(**setting_values),
    )


# --------------------------------------------------------------------------
# rendering

def _render_kernel(k: ScalarKernel) -> str:
    if isinstance(k, PwlKernel):
        pts = " ".join(f"({_num_text(x)},{_num_text(y)})" for x, y in k.points)
        return f"pwl {pts}"
    assert isinstance(k, BuiltinKernel)
    if k.name == "clamp":
        lo, hi = k.params
        base = f"clamp({_num_text(lo)},{_num_text(hi)})"
    else:
        base = k.name
    if k.scale != 1.0:
        base += f" scale={_num_text(k.scale)}"
    return base


def _render_vec(vals) -> str:
    return "(" + ",".join(_num_text(v) for v in vals) + ")"


def render(model: Model) -> str:
    """Canonical text for a model; reparses to an equal Model."""
    lines = [f"space E {model.n}", f"space F {model.m}"]
    for name, k in model.kernels:
        lines.append(f"kernel {name} {_render_kernel(k)}")
    for d in model.operators:
        if isinstance(d, MatrixOpDef):
            body = "; ".join(" ".join(row) for row in d.rows)
            lines.append(f"op {d.name} {d.shape[0]}x{d.shape[1]} [{body}]")
        elif isinstance(d, RankOneOpDef):
            lines.append(f"op {d.name} rank1 {d.phi} u={_render_vec(d.u)}")
        else:
            lines.append(
                f"op {d.name} integral ({render_expr(d.expr)}) "
                f"s={_render_vec(d.s_grid)} t={_render_vec(d.t_grid)} "
                f"w={_render_vec(d.weights)}"
            )
    for name, v in model.probes:
        lines.append(f"probe {name} = {_render_vec(v.coords)}")
    defaults = Settings()
    for key in _SETTING_KEYS:
        val = getattr(model.settings, key)
        if val != getattr(defaults, key):
            text = str(val) if isinstance(val, int) else _num_text(val)
            lines.append(f"set {key} {text}")
    return "\n".join(lines) + "\n"
