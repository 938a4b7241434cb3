"""Expected GWT text blocks for the eight pattern fixtures, plus helpers.

Comparison is done on whitespace-normalized GIVEN/WHEN/THEN lines only;
scenario names and header lines are the tool's own framing.
"""

from flowspec.emit import emit_feature
from flowspec.feature import format_feature

SEQUENCE_GWT = """
GIVEN S1
WHEN ev1
THEN a1
"""

PARALLEL_SPLIT_GWT = """
GIVEN S1
WHEN ev1
THEN a1 AND a2 AND a3
"""

SYNCHRONIZATION_GWT = """
GIVEN S1
WHEN ev1
THEN a1 AND a3

GIVEN S2
WHEN ev2
THEN a2 AND a3
"""

EXCLUSIVE_CHOICE_GWT = """
GIVEN S1
WHEN g1
THEN a1

GIVEN S1
WHEN g2
THEN a2
"""

SIMPLE_MERGE_GWT = SYNCHRONIZATION_GWT

# Corrected, internally consistent form: the context state is S1 in every
# scenario and the third condition covers both guards.
MULTIPLE_CHOICE_GWT = """
GIVEN S1 AND g1 AND NOT g2
WHEN ev1
THEN a1 AND a2

GIVEN S1 AND g2 AND NOT g1
WHEN ev1
THEN a1 AND a3

GIVEN S1 AND g1 AND g2
WHEN ev1
THEN a1 AND a2 AND a3
"""

SYNCHRONIZE_MERGE_GWT = """
GIVEN S1 AND S2
WHEN e1 AND e2 AND e3
THEN a1; a2; a3 AND S3
"""

MULTIPLE_MERGE_GWT = """
GIVEN S1
WHEN ev1 AND g1
THEN a1; a4 AND S4

GIVEN S2
WHEN ev2 AND g1
THEN a2; a4 AND S4

GIVEN S3
WHEN ev3 AND g1
THEN a3; a4 AND S4
"""

SPECIAL_CASES_GWT = """
GIVEN alpha
WHEN ev1
THEN a1 AND a2

GIVEN S1
WHEN ev2
THEN a3 AND a4 AND a5 AND S2

GIVEN S1
WHEN ev2
THEN a3 AND a4 AND a6 AND S3

GIVEN S5
WHEN ev7
THEN a9 AND S6.1

GIVEN S6.1
WHEN ev8
THEN a10 AND S6.2

GIVEN S6.1
WHEN ev10
THEN a12 AND S6.3

GIVEN S6.2
WHEN ev9
THEN a11 AND S6.3

GIVEN S6.3
WHEN ev11
THEN a13 AND Beta
"""

PATTERN_GOLDENS = {
    "m1": ("t2", SEQUENCE_GWT),
    "m2": ("t2", PARALLEL_SPLIT_GWT),
    "m3": ("t2", SYNCHRONIZATION_GWT),
    "m4": (("t2", "t3"), EXCLUSIVE_CHOICE_GWT),
    "m5": ("t3", SIMPLE_MERGE_GWT),
    "m6": ("t2", MULTIPLE_CHOICE_GWT),
    "m7": ("t2", SYNCHRONIZE_MERGE_GWT),
    "m8": ("t2", MULTIPLE_MERGE_GWT),
}


def normalize_block(text: str) -> list[str]:
    return [" ".join(line.split()) for line in text.strip().splitlines() if line.strip()]


def gwt_lines(doc, tids=None, style="paper_upper") -> list[str]:
    """Whitespace-normalized clause lines, optionally restricted to the
    scenarios of some transition ids (taken from the scenario names)."""
    wanted = None if tids is None else set(tids)
    out = []
    current = None
    for line in format_feature(doc, style).splitlines():
        if line.startswith("Scenario: "):
            parts = line[len("Scenario: ") :].split()
            current = parts[1] if len(parts) >= 2 else None
            continue
        if line.split(" ", 1)[0].upper() in ("GIVEN", "WHEN", "THEN"):
            if wanted is None or current in wanted:
                out.append(" ".join(line.split()))
    return out


def pattern_lines(model, key):
    tids, golden = PATTERN_GOLDENS[key]
    if isinstance(tids, str):
        tids = (tids,)
    doc = emit_feature(model, "paper_exact")
    return gwt_lines(doc, tids), normalize_block(golden)
