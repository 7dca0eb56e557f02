import pytest

from uryson.lattice import Mask, vec
from uryson.report import csv_table, dumps, format_float, jsonable


def test_format_float():
    assert format_float(0.0) == "0"
    assert format_float(-0.0) == "0"
    assert format_float(1.0) == "1"
    assert format_float(0.5) == "0.5"
    assert format_float(1e-9) == "1e-09"
    assert format_float(1 / 3) == "0.333333333333"
    with pytest.raises(ValueError, match="non-finite"):
        format_float(float("nan"))
    with pytest.raises(ValueError, match="non-finite"):
        format_float(float("inf"))


def test_jsonable_translates_domain_objects():
    obj = {"v": vec(1.0, -2.0), "m": Mask.from_indices(3, (2, 0)), "n": None}
    assert jsonable(obj) == {"v": [1.0, -2.0], "m": [0, 2], "n": None}
    with pytest.raises(TypeError):
        jsonable(object())


def test_dumps_golden_bytes():
    report = {
        "b": [1, 2.5, True],
        "a": {"nested": vec(0.0, -0.0)},
        "c": "text",
        "d": None,
        "empty_list": [],
        "empty_map": {},
    }
    assert dumps(report) == (
        "{\n"
        '  "a": {\n'
        '    "nested": [\n'
        "      0,\n"
        "      0\n"
        "    ]\n"
        "  },\n"
        '  "b": [\n'
        "    1,\n"
        "    2.5,\n"
        "    true\n"
        "  ],\n"
        '  "c": "text",\n'
        '  "d": null,\n'
        '  "empty_list": [],\n'
        '  "empty_map": {}\n'
        "}\n"
    )


def test_dumps_sorts_keys_stably():
    assert dumps({"z": 1, "a": 2}) == dumps({"a": 2, "z": 1})


def test_dumps_coerces_keys_to_strings():
    assert dumps({1: "x"}) == '{\n  "1": "x"\n}\n'


def test_csv_table():
    text = csv_table(["probe", "y1"], [["x1", 0.5], ["x2", -0.0]])
    assert text == "probe,y1\nx1,0.5\nx2,0\n"
