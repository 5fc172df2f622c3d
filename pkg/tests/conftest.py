import json
from pathlib import Path

import pytest

from algebra.funcpoly import Field, FuncPoly, ScalarSymbol
from fock.fields import FieldSpec, RadialBump

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden():
    def load(name):
        path = GOLDEN / name
        return path.read_text(encoding="utf-8"), json.loads(path.read_text(encoding="utf-8"))

    return load


@pytest.fixture
def b():
    return FuncPoly.atom(Field.B)


@pytest.fixture
def V():
    return FuncPoly.atom(Field.V)


@pytest.fixture
def B0():
    return FuncPoly.scalar(ScalarSymbol.B0)


@pytest.fixture
def free_spec():
    return FieldSpec(B0=1.0)


@pytest.fixture
def radial_spec():
    """Centered magnetic and electric bumps, smooth enough for q <= 1."""
    return FieldSpec(
        B0=1.0,
        b=(RadialBump(c=0.3, R=1.5, k=8),),
        V=(RadialBump(c=0.5, R=2.0, k=8),),
    )


@pytest.fixture
def offcenter_spec():
    return FieldSpec(
        B0=1.0,
        V=(RadialBump(center=(0.5, -0.25), c=0.5, R=1.5, k=8),),
    )


@pytest.fixture
def clean_env(monkeypatch):
    import os

    for key in list(os.environ):
        if key.startswith("LTBX_"):
            monkeypatch.delenv(key)
    return monkeypatch
