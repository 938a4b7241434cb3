"""Scenario emission: turn a classified model into a feature document.

Two modes:

``paper_exact``
    Reproduces the compact presentation shape of each pattern: sequences and
    plain splits/merges list their actions as AND-joined terms and omit the
    resulting state; synchronizing and multiple merges render ordered
    ``;``-sequences and name the target; transitions that touch entry/exit
    actions or embedded states render one row per output with the resulting
    state appended (entry actions, when present, stand in for the state).

``strict``
    Lossless and replayable: guard literals always sit in GIVEN, events in
    WHEN (with a ``_done`` placeholder when a transition has none), and THEN
    carries the full ordered action trace followed by one state term per
    resulting active leaf.
"""

from __future__ import annotations

from itertools import combinations

from . import model as m
from .errors import TooManyChoiceBranches
from .feature import ActionSeq, FeatureDoc, Scenario, StateTerm, Term, scenario_from_clauses
from .model import PatternKind, ProcessModel, TransitionDecl
from .patterns import classify, effective_guard_literals

MODES = ("paper_exact", "strict")
COMPLETION_EVENT = "_done"
MAX_CHOICE_BRANCHES = 10


def normalize_mode(mode: str) -> str:
    mode = mode.replace("-", "_")
    if mode not in MODES:
        raise ValueError(f"unknown emission mode {mode!r}")
    return mode


def enumerate_choice_subsets(branches):
    """All nonempty subsets of ``branches``, smallest first, then by
    declaration order.  Raises TooManyChoiceBranches above 10 branches."""
    items = list(branches)
    if not items:
        raise ValueError("at least one branch is required")
    if len(items) > MAX_CHOICE_BRANCHES:
        raise TooManyChoiceBranches(len(items), MAX_CHOICE_BRANCHES)
    subsets = []
    for size in range(1, len(items) + 1):
        for picked in combinations(range(len(items)), size):
            subsets.append(tuple(items[i] for i in picked))
    return subsets


def _subset_indices(n: int) -> list[tuple[int, ...]]:
    out = []
    for size in range(1, n + 1):
        out.extend(combinations(range(n), size))
    return out


def _guard_term(atom: str, negated: bool) -> Term:
    return Term(atom, negated, "guard")


def _state_term(path: str) -> Term:
    return Term(path, False, "state")


def _event_terms(events: list[str]) -> list[Term]:
    terms = [Term(e, False, "event") for e in events]
    return terms or [Term(COMPLETION_EVENT, False, "event")]


class _Emitter:
    def __init__(self, model: ProcessModel, mode: str):
        self.model = model
        self.mode = mode
        instances, _ = classify(model)
        self.kinds = {inst.transition_id: inst.kind for inst in instances}

    # -- shared pieces -------------------------------------------------

    def events_of(self, consumed, transition) -> list[str]:
        events = [b.event for b in consumed if b.event]
        if transition.shared_event:
            events.append(transition.shared_event)
        return events

    def given_terms(self, sources, lits) -> list[Term]:
        return [_state_term(s) for s in sources] + [
            _guard_term(a, n) for a, n in lits
        ]

    def scenario(self, name, given, when, then) -> Scenario:
        return scenario_from_clauses(name, given, when, then)

    # -- strict mode -----------------------------------------------------

    def strict_firing(self, name, t, consumed, fired, lits) -> Scenario:
        plan = m.firing_plan(self.model, t, consumed, fired)
        trace = plan.trace()
        items: list = []
        if trace:
            items.append(ActionSeq(tuple(trace)))
        items.extend(StateTerm(leaf) for leaf in plan.result_leaves())
        given = self.given_terms([b.source for b in consumed], lits)
        when = _event_terms(self.events_of(consumed, t))
        return self.scenario(name, given, when, items)

    def strict_scenarios(self, t: TransitionDecl, kind: PatternKind) -> list[Scenario]:
        base = f"{kind.value} {t.id}"
        if kind == PatternKind.MULTIPLE_CHOICE:
            return [
                self.strict_firing(f"{base} {i + 1}", t, t.inputs, fired, lits)
                for i, (fired, lits) in enumerate(self.choice_cases(t))
            ]
        if kind in (PatternKind.SIMPLE_MERGE, PatternKind.MULTIPLE_MERGE):
            shared = list(t.shared_guard.literals) if t.shared_guard else []
            return [
                self.strict_firing(f"{base} {i + 1}", t, (inp,), None, shared)
                for i, inp in enumerate(t.inputs)
            ]
        lits = list(effective_guard_literals(t))
        return [self.strict_firing(base, t, t.inputs, None, lits)]

    # -- choice enumeration ------------------------------------------------

    def choice_cases(self, t: TransitionDecl):
        """(fired output indices, guard literals) per nonempty guard subset."""
        guarded = [i for i, b in enumerate(t.outputs) if b.guard]
        always = [i for i, b in enumerate(t.outputs) if not b.guard]
        if len(guarded) > MAX_CHOICE_BRANCHES:
            raise TooManyChoiceBranches(len(guarded), MAX_CHOICE_BRANCHES)
        shared = list(t.shared_guard.literals) if t.shared_guard else []
        cases = []
        for subset in _subset_indices(len(guarded)):
            included = [guarded[k] for k in subset]
            fired = tuple(sorted(always + included))
            lits = list(shared)
            seen = {atom for atom, _ in lits}
            for i in included:
                for atom, neg in t.outputs[i].guard.literals:
                    if atom not in seen:
                        seen.add(atom)
                        lits.append((atom, neg))
            for i in guarded:
                if i in included:
                    continue
                for atom, neg in t.outputs[i].guard.literals:
                    if atom not in seen:
                        seen.add(atom)
                        lits.append((atom, not neg))
                        break
            cases.append((fired, lits))
        return cases

    # -- paper-exact mode ---------------------------------------------------

    def special_involved(self, t: TransitionDecl) -> bool:
        nodes = m.state_map(self.model)
        for b in t.inputs:
            node = nodes.get(b.source)
            if "." in b.source or (node and (node.exit_actions or node.composite)):
                return True
        for b in t.outputs:
            node = nodes.get(b.target)
            if "." in b.target or (node and (node.entry_actions or node.composite)):
                return True
        return False

    def paper_scenarios(self, t: TransitionDecl, kind: PatternKind) -> list[Scenario]:
        base = f"{kind.value} {t.id}"
        if kind == PatternKind.SYNCHRONIZE_MERGE:
            plan = m.firing_plan(self.model, t)
            items: list = []
            trace = plan.trace()
            if trace:
                items.append(ActionSeq(tuple(trace)))
            items.extend(StateTerm(p.leaf) for p in plan.outputs)
            given = self.given_terms(
                [b.source for b in t.inputs],
                list(effective_guard_literals(t)),
            )
            when = _event_terms(self.events_of(t.inputs, t))
            return [self.scenario(base, given, when, items)]

        if kind == PatternKind.MULTIPLE_MERGE:
            scenarios = []
            shared = list(t.shared_guard.literals) if t.shared_guard else []
            for i, inp in enumerate(t.inputs):
                plan = m.firing_plan(self.model, t, (inp,), None)
                items = []
                trace = plan.trace()
                if trace:
                    items.append(ActionSeq(tuple(trace)))
                items.extend(StateTerm(p.leaf) for p in plan.outputs)
                when = [Term(e, False, "event") for e in self.events_of((inp,), t)]
                when.extend(_guard_term(a, n) for a, n in shared)
                if not when:
                    when = _event_terms([])
                scenarios.append(
                    self.scenario(f"{base} {i + 1}", [_state_term(inp.source)], when, items)
                )
            return scenarios

        if kind in (PatternKind.SYNCHRONIZATION, PatternKind.SIMPLE_MERGE):
            scenarios = []
            shared = list(t.shared_guard.literals) if t.shared_guard else []
            for i, inp in enumerate(t.inputs):
                plan = m.firing_plan(self.model, t, (inp,), None)
                actions = plan.trace()
                items: list = [ActionSeq((a,)) for a in actions]
                if not items:
                    items = [StateTerm(p.leaf) for p in plan.outputs]
                when = [Term(e, False, "event") for e in self.events_of((inp,), t)]
                when.extend(_guard_term(a, n) for a, n in shared)
                if not when:
                    when = _event_terms([])
                scenarios.append(
                    self.scenario(
                        f"{base} {i + 1}", [_state_term(inp.source)], when, items
                    )
                )
            return scenarios

        if kind == PatternKind.MULTIPLE_CHOICE:
            scenarios = []
            src = [b.source for b in t.inputs]
            for i, (fired, lits) in enumerate(self.choice_cases(t)):
                plan = m.firing_plan(self.model, t, t.inputs, fired)
                actions = plan.trace()
                items = [ActionSeq((a,)) for a in actions]
                if not items:
                    items = [StateTerm(p.leaf) for p in plan.outputs]
                scenarios.append(
                    self.scenario(
                        f"{base} {i + 1}",
                        self.given_terms(src, lits),
                        _event_terms(self.events_of(t.inputs, t)),
                        items,
                    )
                )
            return scenarios

        if kind == PatternKind.EXCLUSIVE_CHOICE:
            plan = m.firing_plan(self.model, t)
            actions = plan.trace()
            items = [ActionSeq((a,)) for a in actions]
            if not items:
                items = [StateTerm(p.leaf) for p in plan.outputs]
            when = [Term(e, False, "event") for e in self.events_of(t.inputs, t)]
            when.extend(_guard_term(a, n) for a, n in effective_guard_literals(t))
            if not when:
                when = _event_terms([])
            return [
                self.scenario(base, [_state_term(t.inputs[0].source)], when, items)
            ]

        # Sequence and parallel split; special-case styling applies here.
        if kind == PatternKind.PARALLEL_SPLIT and self.special_involved(t):
            scenarios = []
            plan = m.firing_plan(self.model, t)
            prefix = list(plan.exit_actions) + list(plan.input_actions) + list(
                plan.shared_actions
            )
            for i, out in enumerate(plan.outputs):
                actions = prefix + list(out.branch.actions)
                items = [ActionSeq((a,)) for a in actions]
                if out.entry_actions:
                    items.extend(ActionSeq((a,)) for a in out.entry_actions)
                else:
                    items.append(StateTerm(out.leaf))
                scenarios.append(
                    self.scenario(
                        f"{base} {i + 1}",
                        [_state_term(b.source) for b in t.inputs],
                        _event_terms(self.events_of(t.inputs, t)),
                        items,
                    )
                )
            return scenarios

        plan = m.firing_plan(self.model, t)
        given = [_state_term(b.source) for b in t.inputs]
        when = [Term(e, False, "event") for e in self.events_of(t.inputs, t)]
        when.extend(_guard_term(a, n) for a, n in effective_guard_literals(t))
        if not when:
            when = _event_terms([])
        if self.special_involved(t):
            prefix = list(plan.exit_actions) + list(plan.input_actions) + list(
                plan.shared_actions
            )
            items = [ActionSeq((a,)) for a in prefix]
            for out in plan.outputs:
                items.extend(ActionSeq((a,)) for a in out.branch.actions)
                if out.entry_actions:
                    items.extend(ActionSeq((a,)) for a in out.entry_actions)
                else:
                    items.append(StateTerm(out.leaf))
            return [self.scenario(base, given, when, items)]
        actions = plan.trace()
        items = [ActionSeq((a,)) for a in actions]
        if not items:
            items = [StateTerm(p.leaf) for p in plan.outputs]
        return [self.scenario(base, given, when, items)]

    # -- entry point ---------------------------------------------------------

    def emit(self) -> FeatureDoc:
        scenarios: list[Scenario] = []
        for t in self.model.transitions:
            kind = self.kinds[t.id]
            if self.mode == "strict":
                scenarios.extend(self.strict_scenarios(t, kind))
            else:
                scenarios.extend(self.paper_scenarios(t, kind))
        return FeatureDoc(
            title=self.model.title,
            role=self.model.role,
            feature=self.model.feature,
            benefit=self.model.benefit,
            scenarios=tuple(scenarios),
            mode_hint="strict" if self.mode == "strict" else "paper-exact",
        )


def emit_feature(model: ProcessModel, mode: str = "paper_exact") -> FeatureDoc:
    """Emit one scenario group per transition, in declaration order."""
    return _Emitter(model, normalize_mode(mode)).emit()
