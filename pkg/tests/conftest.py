"""Shared fixtures: the nine pattern models, loaded from tests/data."""

from __future__ import annotations

from pathlib import Path

import pytest

from flowspec.dsl import parse_dsl

DATA_DIR = Path(__file__).parent / "data"

FIXTURE_DSL = {
    path.stem: path.read_text() for path in sorted(DATA_DIR.glob("m[1-9].pml"))
}

M1_DSL = FIXTURE_DSL["m1"]
M9_DSL = FIXTURE_DSL["m9"]


@pytest.fixture(scope="session")
def fixtures():
    return {name: parse_dsl(text, f"{name}.pml") for name, text in FIXTURE_DSL.items()}


def _single(name):
    @pytest.fixture(scope="session")
    def fixture(fixtures):
        return fixtures[name]

    fixture.__name__ = name
    return fixture


m1 = _single("m1")
m2 = _single("m2")
m3 = _single("m3")
m4 = _single("m4")
m5 = _single("m5")
m6 = _single("m6")
m7 = _single("m7")
m8 = _single("m8")
m9 = _single("m9")
