"""Core model invariants: validation, resolution, configurations."""

import pytest

from flowspec import model as m
from flowspec.errors import UnknownState
from flowspec.model import (
    Configuration,
    InBranch,
    OutBranch,
    ProcessModel,
    StateNode,
    TransitionDecl,
    guard,
    initial_configuration,
    resolve,
    validate,
)


def simple(name, path=None, **kw):
    return StateNode(name=name, path=path or name, **kw)


def test_is_ident_accepts_tokens_and_paths():
    for good in ("S1", "ev11", "a_1", "S6.1", "Beta", "x.y.z", "1"):
        assert m.is_ident(good)
    for bad in ("", "S 1", ".S1", "S1.", "S..1", "a-b", "é"):
        assert not m.is_ident(bad)


def test_duplicate_sibling_states_reported(m1):
    bad = ProcessModel(
        title="dup",
        states=(simple("S1"), simple("S1")),
    )
    codes = [d.code for d in validate(bad)]
    assert "DuplicateStateName" in codes


def test_unresolved_endpoint_reported():
    bad = ProcessModel(
        title="bad",
        states=(simple("S1"),),
        transitions=(
            TransitionDecl(
                id="t1",
                inputs=(InBranch("S1", "ev1"),),
                outputs=(OutBranch("SX"),),
            ),
        ),
    )
    codes = [d.code for d in validate(bad)]
    assert codes.count("UnresolvedEndpoint") == 1


def test_fixture_m9_validates_clean(m9):
    assert validate(m9) == []


def test_all_fixtures_validate_clean(fixtures):
    for name, model in fixtures.items():
        assert validate(model) == [], name


def test_validate_reports_every_violation_not_only_first():
    bad = ProcessModel(
        title="multi",
        states=(simple("S1"), simple("S1")),
        transitions=(
            TransitionDecl(
                id="t1",
                inputs=(InBranch("S1"), InBranch("SX")),
                outputs=(OutBranch("SY"),),
            ),
        ),
    )
    codes = [d.code for d in validate(bad)]
    assert "DuplicateStateName" in codes
    assert "UnresolvedEndpoint" in codes
    assert "JoinKindRequired" in codes


def test_validate_is_order_stable(m9):
    assert validate(m9) == validate(m9)


def test_namespace_collision_reported():
    bad = ProcessModel(
        states=(simple("S1"), simple("S2")),
        transitions=(
            TransitionDecl(
                id="t1",
                inputs=(InBranch("S1", event="S2"),),
                outputs=(OutBranch("S2"),),
            ),
        ),
    )
    codes = [d.code for d in validate(bad)]
    assert "NamespaceCollision" in codes


def test_namespaces_disjoint_in_valid_models(fixtures):
    for model in fixtures.values():
        spaces = [
            m.state_paths(model) | {model.initial_name, model.final_name},
            m.event_names(model),
            m.guard_atoms(model),
            m.action_names(model),
        ]
        for i, a in enumerate(spaces):
            for b in spaces[i + 1 :]:
                assert not (a & b)


def test_split_kind_rules():
    base = dict(
        states=(simple("S1"), simple("S2"), simple("S3")),
    )
    or_no_guard = ProcessModel(
        **base,
        transitions=(
            TransitionDecl(
                id="t1",
                inputs=(InBranch("S1", "ev1"),),
                outputs=(OutBranch("S2"), OutBranch("S3")),
                split_kind="or",
            ),
        ),
    )
    assert "OrSplitNeedsGuardedOutput" in [d.code for d in validate(or_no_guard)]
    and_guarded = ProcessModel(
        **base,
        transitions=(
            TransitionDecl(
                id="t1",
                inputs=(InBranch("S1", "ev1"),),
                outputs=(OutBranch("S2", guard=guard("g1")), OutBranch("S3")),
                split_kind="and",
            ),
        ),
    )
    assert "AndSplitForbidsGuards" in [d.code for d in validate(and_guarded)]


def test_resolve_nested_child(m9):
    node = resolve(m9, "S6.1")
    assert isinstance(node, StateNode)
    assert node.name == "S6.1".split(".")[-1]
    parent = resolve(m9, "S6")
    assert parent.children[0] is node
    assert parent.initial_child == "S6.1"


def test_resolve_pseudostates(m9):
    assert resolve(m9, "alpha").kind == "initial"
    assert resolve(m9, "Beta").kind == "final"


def test_resolve_unknown_state(m9):
    with pytest.raises(UnknownState):
        resolve(m9, "S6.9")


def test_resolve_is_left_inverse_of_paths(fixtures):
    for model in fixtures.values():
        for node in m.iter_states(model):
            assert resolve(model, node.path) is node


def test_initial_configuration(m9, m1):
    assert initial_configuration(m9) == Configuration.of("alpha")
    assert initial_configuration(m1) == Configuration.of("alpha")


def test_initial_configuration_renamed():
    model = ProcessModel(initial_name="start", states=(simple("S1"),))
    assert initial_configuration(model) == Configuration.of("start")


def test_guard_expr_semantics():
    g = guard("g1", ("g2", True))
    assert g.holds({"g1": True})
    assert g.holds({"g1": True, "g2": False})
    assert not g.holds({"g1": True, "g2": True})
    assert not g.holds({})
    assert g.render() == "g1 and not g2"


def test_legal_configuration_rules(m9, m8):
    assert m.legal_configuration(m9, Configuration.of("S6.1")) is None
    assert m.legal_configuration(m9, Configuration.of("S2", "S3")) is None
    # two children of the same composite cannot both be active
    assert m.legal_configuration(m9, Configuration.of("S6.1", "S6.2")) is not None
    # token counts above one only on multi-join targets
    assert m.legal_configuration(m8, Configuration.of("S4", "S4")) is None
    assert m.legal_configuration(m8, Configuration.of("S1", "S1")) is not None


def test_firing_plan_orders_exits_then_actions_then_entries(m9):
    t2 = m9.transitions[1]
    plan = m.firing_plan(m9, t2)
    assert plan.exit_actions == ("a3", "a4")
    assert plan.trace() == ["a3", "a4", "a5", "a6"]
    assert plan.result_leaves() == ["S2", "S3"]

    t3 = m9.transitions[2]
    plan = m.firing_plan(m9, t3)
    assert plan.trace() == ["a9"]
    assert plan.result_leaves() == ["S6.1"]

    t1 = m9.transitions[0]
    plan = m.firing_plan(m9, t1)
    assert plan.trace() == ["a1", "a2"]
    assert plan.result_leaves() == ["S1"]
