"""Byte-exact regression against the frozen feature files."""

import pytest

from flowspec.emit import emit_feature
from flowspec.feature import format_feature

from conftest import DATA_DIR

GOLDEN = DATA_DIR / "golden"


@pytest.mark.parametrize("key", [f"m{i}" for i in range(1, 10)])
@pytest.mark.parametrize("mode,style", [("paper_exact", "paper_upper"), ("strict", "gherkin")])
def test_emission_matches_frozen_file(fixtures, key, mode, style):
    suffix = "paper" if mode == "paper_exact" else "strict"
    expected = (GOLDEN / f"{key}.{suffix}.feature").read_text()
    got = format_feature(emit_feature(fixtures[key], mode), style)
    assert got == expected
