"""Labeled workflow nets: tree translation, token semantics, PNML export."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import NotEnabled
from .tree import NodePath, Op, TreeNode, _require_valid


@dataclass(frozen=True)
class Marking:
    """Immutable multiset of places."""

    items: tuple[tuple[str, int], ...]  # sorted, counts > 0

    @staticmethod
    def of(*places: str) -> "Marking":
        counts: dict[str, int] = {}
        for p in places:
            counts[p] = counts.get(p, 0) + 1
        return Marking(tuple(sorted(counts.items())))

    def count(self, place: str) -> int:
        for p, n in self.items:
            if p == place:
                return n
        return 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.items)

    def total(self) -> int:
        return sum(n for _, n in self.items)


@dataclass(frozen=True)
class LabeledPetriNet:
    """Workflow net with a unique source and sink place.

    ``label`` maps transitions to an activity name or None for silent
    transitions. ``transition_origin``/``place_origin`` record which tree
    node (by path) created each element; the incremental discovery layer
    uses them to localize deviations.
    """

    places: frozenset[str]
    transitions: frozenset[str]
    label: Mapping[str, str | None]
    arcs: frozenset[tuple[str, str]]
    source: str
    sink: str
    transition_origin: Mapping[str, NodePath] = field(default_factory=dict)
    place_origin: Mapping[str, NodePath] = field(default_factory=dict)

    @cached_property
    def preset(self) -> dict[str, tuple[str, ...]]:
        pre: dict[str, list[str]] = {t: [] for t in self.transitions}
        for a, b in self.arcs:
            if b in pre:
                pre[b].append(a)
        return {t: tuple(sorted(ps)) for t, ps in pre.items()}

    @cached_property
    def postset(self) -> dict[str, tuple[str, ...]]:
        post: dict[str, list[str]] = {t: [] for t in self.transitions}
        for a, b in self.arcs:
            if a in post:
                post[a].append(b)
        return {t: tuple(sorted(ps)) for t, ps in post.items()}

    @property
    def initial_marking(self) -> Marking:
        return Marking.of(self.source)

    @property
    def final_marking(self) -> Marking:
        return Marking.of(self.sink)

    def visible_labels(self) -> set[str]:
        return {l for l in self.label.values() if l is not None}


def tree_to_petri_net(tree: TreeNode) -> LabeledPetriNet:
    """Translate a process tree into a workflow net with the same language.

    Every subtree is wired between an entry and an exit place. Sequences
    chain children through shared intermediate places, choices share the
    pair, parallels fan out through silent split/join transitions, and
    loops route the redo child backwards through two inner places. No
    place fusion is attempted; silent transitions are free in alignments.
    """
    _require_valid(tree)

    place_origin: dict[str, NodePath] = {}
    transition_origin: dict[str, NodePath] = {}
    labels: dict[str, str | None] = {}
    arcs: set[tuple[str, str]] = set()

    def new_place(origin: NodePath) -> str:
        pid = f"p{len(place_origin)}"
        place_origin[pid] = origin
        return pid

    def new_transition(label: str | None, origin: NodePath) -> str:
        tid = f"t{len(transition_origin)}"
        transition_origin[tid] = origin
        labels[tid] = label
        return tid

    def build(node: TreeNode, path: NodePath, entry: str, exit_: str) -> None:
        kind = node.kind
        if kind in (Op.ACTIVITY, Op.TAU):
            t = new_transition(node.label if kind is Op.ACTIVITY else None, path)
            arcs.add((entry, t))
            arcs.add((t, exit_))
        elif kind is Op.SEQUENCE:
            bounds = [entry]
            for _ in range(len(node.children) - 1):
                bounds.append(new_place(path))
            bounds.append(exit_)
            for i, child in enumerate(node.children):
                build(child, path + (i,), bounds[i], bounds[i + 1])
        elif kind is Op.XOR:
            for i, child in enumerate(node.children):
                build(child, path + (i,), entry, exit_)
        elif kind is Op.AND:
            split = new_transition(None, path)
            join = new_transition(None, path)
            arcs.add((entry, split))
            arcs.add((join, exit_))
            for i, child in enumerate(node.children):
                child_path = path + (i,)
                p_in = new_place(child_path)
                p_out = new_place(child_path)
                arcs.add((split, p_in))
                arcs.add((p_out, join))
                build(child, child_path, p_in, p_out)
        else:  # LOOP
            p_do = new_place(path)
            p_done = new_place(path)
            t_enter = new_transition(None, path)
            t_exit = new_transition(None, path)
            arcs.add((entry, t_enter))
            arcs.add((t_enter, p_do))
            arcs.add((p_done, t_exit))
            arcs.add((t_exit, exit_))
            build(node.children[0], path + (0,), p_do, p_done)
            build(node.children[1], path + (1,), p_done, p_do)

    source = new_place(())
    sink = new_place(())
    build(tree, (), source, sink)

    return LabeledPetriNet(
        places=frozenset(place_origin),
        transitions=frozenset(transition_origin),
        label=labels,
        arcs=frozenset(arcs),
        source=source,
        sink=sink,
        transition_origin=transition_origin,
        place_origin=place_origin,
    )


def enabled(net: LabeledPetriNet, marking: Marking) -> set[str]:
    counts = marking.as_dict()
    out = set()
    for t in net.transitions:
        if all(counts.get(p, 0) >= 1 for p in net.preset[t]):
            out.add(t)
    return out


def fire(net: LabeledPetriNet, marking: Marking, transition: str) -> Marking:
    """Consume the preset, produce the postset. Raises NotEnabled."""
    if transition not in net.transitions:
        raise NotEnabled(f"unknown transition {transition}")
    counts = marking.as_dict()
    for p in net.preset[transition]:
        if counts.get(p, 0) < 1:
            raise NotEnabled(f"{transition} lacks a token on {p}")
        counts[p] -= 1
    for p in net.postset[transition]:
        counts[p] = counts.get(p, 0) + 1
    return Marking(tuple(sorted((p, n) for p, n in counts.items() if n > 0)))


def _numeric_id_key(identifier: str) -> tuple[str, int]:
    head = identifier.rstrip("0123456789")
    tail = identifier[len(head):]
    return (head, int(tail) if tail else -1)


def serialize_pnml(net: LabeledPetriNet, name: str = "net0") -> bytes:
    """PNML core model with initial marking on source and a final marking
    of one token on sink; silent transitions have no <name> element."""
    pnml = ET.Element("pnml")
    net_el = ET.SubElement(
        pnml, "net", id=name,
        type="http://www.pnml.org/version-2009/grammar/pnmlcoremodel")
    page = ET.SubElement(net_el, "page", id="page0")

    for pid in sorted(net.places, key=_numeric_id_key):
        place_el = ET.SubElement(page, "place", id=pid)
        if pid == net.source:
            marking_el = ET.SubElement(place_el, "initialMarking")
            ET.SubElement(marking_el, "text").text = "1"
    for tid in sorted(net.transitions, key=_numeric_id_key):
        trans_el = ET.SubElement(page, "transition", id=tid)
        label = net.label.get(tid)
        if label is not None:
            name_el = ET.SubElement(trans_el, "name")
            ET.SubElement(name_el, "text").text = label
    for i, (src, dst) in enumerate(sorted(net.arcs, key=lambda a: (_numeric_id_key(a[0]), _numeric_id_key(a[1])))):
        ET.SubElement(page, "arc", id=f"a{i}", source=src, target=dst)

    finals = ET.SubElement(net_el, "finalmarkings")
    marking = ET.SubElement(finals, "marking")
    sink_el = ET.SubElement(marking, "place", idref=net.sink)
    ET.SubElement(sink_el, "text").text = "1"
    return ET.tostring(pnml, encoding="utf-8", xml_declaration=True)
