import pathlib

import pytest

from uryson.dsl import build_operator, parse_model

DEMO_PATH = pathlib.Path(__file__).resolve().parents[1] / "src" / "uryson" / "demo.ury"


@pytest.fixture(scope="session")
def demo_model():
    return parse_model(DEMO_PATH.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def demo_ops(demo_model):
    return {name: build_operator(demo_model, name) for name in demo_model.operator_names()}
