"""XML model format: equivalence with the DSL and error behavior."""

import pytest

from flowspec.errors import SemanticError, XmlError
from flowspec.model import validate
from flowspec.xmlio import parse_xml

from conftest import DATA_DIR


def test_m1_xml_equals_dsl_parse(m1):
    model = parse_xml((DATA_DIR / "m1.xml").read_text())
    assert model == m1


def test_every_fixture_has_an_equal_xml_form(fixtures):
    for name, model in fixtures.items():
        xml_model = parse_xml((DATA_DIR / f"{name}.xml").read_text())
        assert xml_model == model, name


def test_m9_xml_equals_dsl_parse(m9):
    model = parse_xml((DATA_DIR / "m9.xml").read_text())
    assert model == m9
    assert validate(model) == []
    composite = next(s for s in model.states if s.path == "S6")
    assert len(composite.children) == 3


def test_missing_target_attribute_is_xml_error():
    text = """\
<process title="x">
  <state id="S1"/>
  <trans id="t1">
    <in src="alpha" event="go"/>
    <out/>
  </trans>
</process>
"""
    with pytest.raises(XmlError) as exc:
        parse_xml(text)
    assert "target" in str(exc.value)


def test_malformed_xml_is_xml_error():
    with pytest.raises(XmlError):
        parse_xml("<process title='x'>")


def test_wrong_root_rejected():
    with pytest.raises(XmlError):
        parse_xml("<model/>")


def test_semantic_errors_surface():
    text = """\
<process title="x">
  <state id="S1"/>
  <state id="S1"/>
</process>
"""
    with pytest.raises(SemanticError) as exc:
        parse_xml(text)
    assert any(d.code == "DuplicateStateName" for d in exc.value.diagnostics)


def test_renamed_pseudostates():
    text = """\
<process title="x">
  <initial id="start"/>
  <final id="stop"/>
  <state id="S1"/>
  <trans id="t1">
    <in src="start" event="go"/>
    <out target="S1"/>
  </trans>
</process>
"""
    model = parse_xml(text)
    assert model.initial_name == "start"
    assert model.final_name == "stop"


def test_condition_attribute_parses_guard():
    text = """\
<process title="x">
  <state id="S1"/>
  <state id="S2"/>
  <trans id="t1">
    <in src="alpha" event="go"/>
    <out target="S1"/>
  </trans>
  <trans id="t2" cond="g1 and not g2" do="a1 a2">
    <in src="S1" event="ev"/>
    <out target="S2"/>
  </trans>
</process>
"""
    model = parse_xml(text)
    t2 = model.transitions[1]
    assert t2.shared_guard.literals == (("g1", False), ("g2", True))
    assert t2.shared_actions == ("a1", "a2")
