"""XML model format, a small SCXML-inspired subset.

Layout (attributes in brackets are optional):

    <process title="..." [role=] [feature=] [benefit=]>
      <initial id="alpha"/>?          renames the initial pseudostate
      <final id="Beta"/>?             renames the final pseudostate
      <state id="S1">
        <onentry>a1 a2</onentry>?     space-separated action names
        <onexit>a3</onexit>?
        <initial id="S1.a"/>?         default child of a composite
        <state .../>*
      </state>*
      <trans id="t1" [join=] [split=] [event=] [cond=] [do=]>
        <in src="S1" [event=] [do=]/>+
        <out target="S2" [cond=] [do=] [mandatory="true"]/>+
      </trans>*
    </process>

``cond`` uses the guard syntax of the DSL (``g1 and not g2``); ``do`` holds
space-separated action names.  The element and attribute sets mirror the DSL
productions one to one, so both parsers yield structurally equal models.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from . import model as m
from .errors import SemanticError, XmlError


def _split_names(text: str | None) -> tuple[str, ...]:
    if not text:
        return ()
    return tuple(text.replace(",", " ").split())


def _parse_guard(text: str | None) -> m.GuardExpr | None:
    if not text:
        return None
    literals = []
    tokens = text.split()
    i = 0
    while i < len(tokens):
        if tokens[i] == "and":
            i += 1
            continue
        negated = False
        if tokens[i] == "not":
            negated = True
            i += 1
            if i >= len(tokens):
                raise XmlError(f"dangling 'not' in condition {text!r}")
        literals.append((tokens[i], negated))
        i += 1
    if not literals:
        raise XmlError(f"empty condition {text!r}")
    return m.GuardExpr(tuple(literals))


def _require(elem: ET.Element, attr: str) -> str:
    value = elem.get(attr)
    if value is None:
        raise XmlError(f"<{elem.tag}> element is missing the {attr!r} attribute")
    return value


def _parse_state(elem: ET.Element, parent_path: str | None) -> m.StateNode:
    name = _require(elem, "id")
    if "." in name:
        prefix, _, local = name.rpartition(".")
        if parent_path is None or prefix != parent_path:
            raise XmlError(f"dotted state id {name!r} does not match its nesting")
        name = local
    path = name if parent_path is None else f"{parent_path}.{name}"
    entry: tuple[str, ...] = ()
    exit_: tuple[str, ...] = ()
    initial: str | None = None
    children: list[m.StateNode] = []
    for child in elem:
        if child.tag == "onentry":
            entry += _split_names(child.text)
        elif child.tag == "onexit":
            exit_ += _split_names(child.text)
        elif child.tag == "initial":
            target = _require(child, "id")
            if "." not in target:
                target = f"{path}.{target}"
            initial = target
        elif child.tag == "state":
            children.append(_parse_state(child, path))
        else:
            raise XmlError(f"unexpected <{child.tag}> inside <state>")
    return m.StateNode(
        name=name,
        path=path,
        entry_actions=entry,
        exit_actions=exit_,
        children=tuple(children),
        initial_child=initial,
    )


def _parse_trans(elem: ET.Element) -> m.TransitionDecl:
    tid = _require(elem, "id")
    inputs: list[m.InBranch] = []
    outputs: list[m.OutBranch] = []
    for child in elem:
        if child.tag == "in":
            inputs.append(
                m.InBranch(
                    source=_require(child, "src"),
                    event=child.get("event"),
                    actions=_split_names(child.get("do")),
                )
            )
        elif child.tag == "out":
            outputs.append(
                m.OutBranch(
                    target=_require(child, "target"),
                    guard=_parse_guard(child.get("cond")),
                    actions=_split_names(child.get("do")),
                    mandatory=child.get("mandatory", "").lower() == "true",
                )
            )
        else:
            raise XmlError(f"unexpected <{child.tag}> inside <trans>")
    return m.TransitionDecl(
        id=tid,
        inputs=tuple(inputs),
        outputs=tuple(outputs),
        join_kind=elem.get("join", "none"),
        split_kind=elem.get("split", "none"),
        shared_event=elem.get("event"),
        shared_guard=_parse_guard(elem.get("cond")),
        shared_actions=_split_names(elem.get("do")),
    )


def parse_xml(text: str) -> m.ProcessModel:
    """Parse the XML model format; raises XmlError or SemanticError."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlError(f"malformed XML: {exc}") from exc
    if root.tag != "process":
        raise XmlError(f"expected <process> root, found <{root.tag}>")
    initial_name = m.DEFAULT_INITIAL
    final_name = m.DEFAULT_FINAL
    states: list[m.StateNode] = []
    transitions: list[m.TransitionDecl] = []
    for child in root:
        if child.tag == "initial":
            initial_name = _require(child, "id")
        elif child.tag == "final":
            final_name = _require(child, "id")
        elif child.tag == "state":
            states.append(_parse_state(child, None))
        elif child.tag == "trans":
            transitions.append(_parse_trans(child))
        else:
            raise XmlError(f"unexpected <{child.tag}> inside <process>")
    model = m.ProcessModel(
        title=root.get("title", ""),
        role=root.get("role", ""),
        feature=root.get("feature", ""),
        benefit=root.get("benefit", ""),
        initial_name=initial_name,
        final_name=final_name,
        states=tuple(states),
        transitions=tuple(transitions),
    )
    report = m.validate(model)
    if report:
        raise SemanticError(report)
    return model
