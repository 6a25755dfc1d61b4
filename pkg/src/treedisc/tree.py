"""Process trees: data model, language semantics, editing and PTML I/O.

A process tree is an immutable rooted ordered tree. Inner nodes carry one
of four control-flow operators (sequence, exclusive choice, parallel,
loop); leaves are labeled activities or the silent activity tau. Trees are
plain values: every edit returns a new tree and never mutates its input.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .errors import (
    BelowLeaf,
    BudgetExceeded,
    CannotRemoveRoot,
    DanglingEdge,
    InvalidPath,
    InvalidTree,
    LeftOfRoot,
    MalformedPtml,
    NoSibling,
    UnknownNodeKind,
)


class Op(str, Enum):
    """Node kinds; values double as the JSON wire names."""

    SEQUENCE = "sequence"
    XOR = "xor"
    AND = "and"
    LOOP = "loop"
    ACTIVITY = "activity"
    TAU = "tau"


OPERATORS = frozenset({Op.SEQUENCE, Op.XOR, Op.AND, Op.LOOP})

OP_SYMBOL = {
    Op.SEQUENCE: "→",  # →
    Op.XOR: "×",       # ×
    Op.AND: "∧",       # ∧
    Op.LOOP: "↺",      # ↺
    Op.TAU: "τ",       # τ
}


@dataclass(frozen=True)
class TreeNode:
    kind: Op
    label: str | None = None
    children: tuple["TreeNode", ...] = ()

    def is_leaf(self) -> bool:
        return self.kind in (Op.ACTIVITY, Op.TAU)

    def __str__(self) -> str:
        return format_tree(self)


# The root node stands for the whole tree.
ProcessTree = TreeNode

NodePath = tuple[int, ...]


def seq(*children: TreeNode) -> TreeNode:
    return TreeNode(Op.SEQUENCE, children=tuple(children))


def xor(*children: TreeNode) -> TreeNode:
    return TreeNode(Op.XOR, children=tuple(children))


def par(*children: TreeNode) -> TreeNode:
    return TreeNode(Op.AND, children=tuple(children))


def loop(do: TreeNode, redo: TreeNode) -> TreeNode:
    return TreeNode(Op.LOOP, children=(do, redo))


def activity(label: str) -> TreeNode:
    return TreeNode(Op.ACTIVITY, label=label)


def tau() -> TreeNode:
    return TreeNode(Op.TAU)


def format_tree(node: TreeNode) -> str:
    if node.kind is Op.ACTIVITY:
        return f"'{node.label}'"
    if node.kind is Op.TAU:
        return OP_SYMBOL[Op.TAU]
    inner = ", ".join(format_tree(c) for c in node.children)
    return f"{OP_SYMBOL[node.kind]}({inner})"


# --- navigation ---------------------------------------------------------


def node_at(tree: TreeNode, path: Sequence[int]) -> TreeNode:
    """Resolve a path of child indices; raise InvalidPath out of bounds."""
    node = tree
    for depth, idx in enumerate(path):
        if not 0 <= idx < len(node.children):
            raise InvalidPath(f"index {idx} at depth {depth} out of bounds")
        node = node.children[idx]
    return node


def replace_at(tree: TreeNode, path: Sequence[int], new: TreeNode) -> TreeNode:
    """Return a copy of ``tree`` with the subtree at ``path`` replaced."""
    if not path:
        return new
    idx = path[0]
    if not 0 <= idx < len(tree.children):
        raise InvalidPath(f"index {idx} out of bounds")
    children = list(tree.children)
    children[idx] = replace_at(children[idx], path[1:], new)
    return TreeNode(tree.kind, tree.label, tuple(children))


def iter_nodes(tree: TreeNode, prefix: NodePath = ()) -> Iterator[tuple[NodePath, TreeNode]]:
    """Preorder traversal yielding (path, node)."""
    yield prefix, tree
    for i, child in enumerate(tree.children):
        yield from iter_nodes(child, prefix + (i,))


def leaf_labels(tree: TreeNode) -> set[str]:
    """Activity labels occurring on the tree's leaves."""
    return {n.label for _, n in iter_nodes(tree) if n.kind is Op.ACTIVITY and n.label is not None}


# --- validation ---------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    path: NodePath
    code: str       # LoopArity | EmptyOperator | SingleChildWarning
    severity: str   # "error" | "warning"
    message: str


def validate(tree: TreeNode) -> list[Violation]:
    """Structural check. Errors block semantics; warnings are editor noise."""
    out: list[Violation] = []
    for path, node in iter_nodes(tree):
        if node.kind is Op.LOOP and len(node.children) != 2:
            out.append(Violation(path, "LoopArity", "error",
                                 f"loop has {len(node.children)} children, needs exactly 2"))
        elif node.kind in (Op.SEQUENCE, Op.XOR, Op.AND):
            if len(node.children) == 0:
                out.append(Violation(path, "EmptyOperator", "error",
                                     f"{OP_SYMBOL[node.kind]} operator has no children"))
            elif len(node.children) == 1:
                out.append(Violation(path, "SingleChildWarning", "warning",
                                     f"{OP_SYMBOL[node.kind]} operator has a single child"))
    return out


def validation_errors(tree: TreeNode) -> list[Violation]:
    return [v for v in validate(tree) if v.severity == "error"]


def _require_valid(tree: TreeNode) -> None:
    errors = validation_errors(tree)
    if errors:
        first = errors[0]
        raise InvalidTree(f"{first.code} at {list(first.path)}: {first.message}")


# --- language semantics -------------------------------------------------
#
# ``accepts`` runs the tree as a nondeterministic machine: configurations
# are immutable markers of progress, silent steps are closed over, and the
# trace is consumed one activity at a time. ``enumerate_language`` below is
# an unrelated construction used to cross-check it.

_DONE = ("done",)


def _initial(node: TreeNode):
    return ("node", node)


def _step(cfg) -> Iterator[tuple[str | None, tuple]]:
    tag = cfg[0]
    if tag == "node":
        node: TreeNode = cfg[1]
        kind = node.kind
        if kind is Op.ACTIVITY:
            yield node.label, _DONE
        elif kind is Op.TAU:
            yield None, _DONE
        elif kind is Op.SEQUENCE:
            yield None, ("seq", ("node", node.children[0]), node.children[1:])
        elif kind is Op.XOR:
            for child in node.children:
                yield None, ("node", child)
        elif kind is Op.AND:
            yield None, ("par", tuple(("node", c) for c in node.children))
        else:  # LOOP
            yield None, ("loop_do", ("node", node.children[0]), node)
    elif tag == "seq":
        _, cur, rest = cfg
        for label, nxt in _step(cur):
            if nxt == _DONE:
                if rest:
                    yield label, ("seq", ("node", rest[0]), rest[1:])
                else:
                    yield label, _DONE
            else:
                yield label, ("seq", nxt, rest)
    elif tag == "par":
        children = cfg[1]
        for i, child in enumerate(children):
            for label, nxt in _step(child):
                if nxt == _DONE:
                    remaining = children[:i] + children[i + 1:]
                    if remaining:
                        yield label, ("par", remaining)
                    else:
                        yield label, _DONE
                else:
                    yield label, ("par", children[:i] + (nxt,) + children[i + 1:])
    elif tag == "loop_do":
        _, cur, node = cfg
        for label, nxt in _step(cur):
            if nxt == _DONE:
                yield label, ("loop_exit", node)
            else:
                yield label, ("loop_do", nxt, node)
    elif tag == "loop_exit":
        node = cfg[1]
        yield None, _DONE  # leave the loop
        yield None, ("loop_redo", ("node", node.children[1]), node)
    elif tag == "loop_redo":
        _, cur, node = cfg
        for label, nxt in _step(cur):
            if nxt == _DONE:
                yield label, ("loop_do", ("node", node.children[0]), node)
            else:
                yield label, ("loop_redo", nxt, node)


def _silent_closure(states: set) -> set:
    closed = set(states)
    frontier = list(states)
    while frontier:
        cfg = frontier.pop()
        if cfg == _DONE:
            continue
        for label, nxt in _step(cfg):
            if label is None and nxt not in closed:
                closed.add(nxt)
                frontier.append(nxt)
    return closed


def accepts(tree: TreeNode, trace: Sequence[str]) -> bool:
    """True iff ``trace`` is a word of the tree's language."""
    _require_valid(tree)
    states = _silent_closure({_initial(tree)})
    for act in trace:
        nxt: set = set()
        for cfg in states:
            if cfg == _DONE:
                continue
            for label, succ in _step(cfg):
                if label == act:
                    nxt.add(succ)
        if not nxt:
            return False
        states = _silent_closure(nxt)
    return _DONE in states


# --- language enumeration (independent brute-force construction) --------

MAX_ENUMERATION_LENGTH = 12
DEFAULT_LANGUAGE_BUDGET = 200_000

Word = tuple[str, ...]


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def charge(self, n: int) -> None:
        self.used += n
        if self.used > self.cap:
            raise BudgetExceeded(f"language enumeration exceeded {self.cap} intermediate words")


def _concat(left: set[Word], right: set[Word], limit: int, budget: _Budget) -> set[Word]:
    out = {u + v for u in left for v in right if len(u) + len(v) <= limit}
    budget.charge(len(out))
    return out


def _interleave(u: Word, v: Word) -> set[Word]:
    if not u:
        return {v}
    if not v:
        return {u}
    return {(u[0],) + w for w in _interleave(u[1:], v)} | {(v[0],) + w for w in _interleave(u, v[1:])}


def _shuffle(left: set[Word], right: set[Word], limit: int, budget: _Budget) -> set[Word]:
    out: set[Word] = set()
    for u in left:
        for v in right:
            if len(u) + len(v) > limit:
                continue
            mixed = _interleave(u, v)
            budget.charge(len(mixed))
            out |= mixed
    return out


def _words(node: TreeNode, limit: int, budget: _Budget) -> set[Word]:
    if node.kind is Op.ACTIVITY:
        return {(node.label,)} if limit >= 1 else set()
    if node.kind is Op.TAU:
        return {()}
    if node.kind is Op.XOR:
        out: set[Word] = set()
        for child in node.children:
            out |= _words(child, limit, budget)
        budget.charge(len(out))
        return out
    if node.kind is Op.SEQUENCE:
        acc: set[Word] = {()}
        for child in node.children:
            acc = _concat(acc, _words(child, limit, budget), limit, budget)
            if not acc:
                return acc
        return acc
    if node.kind is Op.AND:
        acc = {()}
        for child in node.children:
            acc = _shuffle(acc, _words(child, limit, budget), limit, budget)
            if not acc:
                return acc
        return acc
    # LOOP: do (redo do)*
    do_words = _words(node.children[0], limit, budget)
    redo_words = _words(node.children[1], limit, budget)
    result = {w for w in do_words if len(w) <= limit}
    frontier = set(result)
    while frontier:
        extended = _concat(_concat(frontier, redo_words, limit, budget), do_words, limit, budget)
        frontier = extended - result
        result |= frontier
    return result


def enumerate_language(tree: TreeNode, max_len: int,
                       budget: int = DEFAULT_LANGUAGE_BUDGET) -> set[Word]:
    """All words of the tree's language with length <= ``max_len``.

    Exhaustive and exponential by nature; ``max_len`` is capped and a word
    budget aborts pathological trees with BudgetExceeded.
    """
    if max_len > MAX_ENUMERATION_LENGTH:
        raise ValueError(f"max_len {max_len} exceeds cap {MAX_ENUMERATION_LENGTH}")
    _require_valid(tree)
    return _words(tree, max_len, _Budget(budget))


# --- editing ------------------------------------------------------------


def insert_node(tree: TreeNode, anchor: Sequence[int], position: str,
                new: TreeNode) -> TreeNode:
    """Insert ``new`` next to or below the node at ``anchor``.

    ``position`` is one of left/right/below. Fresh operator nodes may start
    childless; validate() reports the intermediate state, edits never do.
    """
    anchor = tuple(anchor)
    target = node_at(tree, anchor)
    if position == "below":
        if target.is_leaf():
            raise BelowLeaf("cannot insert below an activity or tau leaf")
        return replace_at(tree, anchor,
                          TreeNode(target.kind, target.label, target.children + (new,)))
    if position in ("left", "right"):
        if not anchor:
            raise LeftOfRoot("the root has no siblings")
        parent_path, idx = anchor[:-1], anchor[-1]
        parent = node_at(tree, parent_path)
        at = idx if position == "left" else idx + 1
        children = parent.children[:at] + (new,) + parent.children[at:]
        return replace_at(tree, parent_path, TreeNode(parent.kind, parent.label, children))
    raise ValueError(f"unknown position {position!r}")


def remove_subtree(tree: TreeNode, target: Sequence[int]) -> TreeNode:
    target = tuple(target)
    if not target:
        raise CannotRemoveRoot("cannot remove the root")
    node_at(tree, target)  # bounds check
    parent_path, idx = target[:-1], target[-1]
    parent = node_at(tree, parent_path)
    children = parent.children[:idx] + parent.children[idx + 1:]
    return replace_at(tree, parent_path, TreeNode(parent.kind, parent.label, children))


def shift_subtree(tree: TreeNode, target: Sequence[int], direction: str) -> TreeNode:
    target = tuple(target)
    if not target:
        raise InvalidPath("cannot shift the root")
    node_at(tree, target)  # bounds check
    parent_path, idx = target[:-1], target[-1]
    parent = node_at(tree, parent_path)
    if direction == "left":
        other = idx - 1
    elif direction == "right":
        other = idx + 1
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if not 0 <= other < len(parent.children):
        raise NoSibling(f"no sibling to the {direction} of index {idx}")
    children = list(parent.children)
    children[idx], children[other] = children[other], children[idx]
    return replace_at(tree, parent_path, TreeNode(parent.kind, parent.label, tuple(children)))


def relabel_node(tree: TreeNode, target: Sequence[int], label: str) -> TreeNode:
    target = tuple(target)
    node = node_at(tree, target)
    if node.kind is not Op.ACTIVITY:
        raise InvalidTree("only activity leaves can be relabeled")
    if not label:
        raise InvalidTree("activity label must be non-empty")
    return replace_at(tree, target, TreeNode(Op.ACTIVITY, label=label))


# --- JSON wire shape ----------------------------------------------------


def tree_to_dict(tree: TreeNode) -> dict:
    out: dict = {"kind": tree.kind.value}
    if tree.kind is Op.ACTIVITY:
        out["label"] = tree.label
    out["children"] = [tree_to_dict(c) for c in tree.children]
    return out


def tree_from_dict(data: dict) -> TreeNode:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("tree node must be an object with a 'kind' field")
    try:
        kind = Op(data["kind"])
    except ValueError:
        raise ValueError(f"unknown node kind {data['kind']!r}") from None
    children = tuple(tree_from_dict(c) for c in data.get("children", []))
    if kind is Op.ACTIVITY:
        label = data.get("label")
        if not label:
            raise ValueError("activity node requires a non-empty 'label'")
        if children:
            raise ValueError("activity node cannot have children")
        return TreeNode(kind, label=label)
    if kind is Op.TAU and children:
        raise ValueError("tau node cannot have children")
    return TreeNode(kind, children=children)


# --- PTML ---------------------------------------------------------------

_PTML_TAG = {
    Op.SEQUENCE: "sequence",
    Op.XOR: "xor",
    Op.AND: "and",
    Op.LOOP: "xorLoop",
}
_TAG_KIND = {v: k for k, v in _PTML_TAG.items()}


def _local(tag: str) -> str:
    return tag.rpartition("}")[2]


def serialize_ptml(tree: TreeNode, name: str = "tree0") -> bytes:
    """Emit the PTML dialect; node ids are deterministic preorder numbers."""
    _require_valid(tree)
    root = ET.Element("ptml")
    pt = ET.SubElement(root, "processTree", id=name, name=name, root="n0")
    node_counter = 0
    edge_counter = 0

    def emit(node: TreeNode) -> str:
        nonlocal node_counter, edge_counter
        node_id = f"n{node_counter}"
        node_counter += 1
        if node.kind is Op.ACTIVITY:
            ET.SubElement(pt, "manualTask", id=node_id, name=node.label or "")
        elif node.kind is Op.TAU:
            ET.SubElement(pt, "automaticTask", id=node_id, name="")
        else:
            ET.SubElement(pt, _PTML_TAG[node.kind], id=node_id, name="")
        for child in node.children:
            child_id = emit(child)
            ET.SubElement(pt, "parentsNode", id=f"e{edge_counter}",
                          sourceId=node_id, targetId=child_id)
            edge_counter += 1
        return node_id

    emit(tree)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def parse_ptml(data: bytes) -> TreeNode:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedPtml(f"not well-formed XML: {exc}") from exc

    pt = None
    if _local(root.tag) == "processTree":
        pt = root
    else:
        for el in root.iter():
            if _local(el.tag) == "processTree":
                pt = el
                break
    if pt is None:
        raise MalformedPtml("no processTree element")
    root_id = pt.get("root")
    if root_id is None:
        raise MalformedPtml("processTree lacks a root attribute")

    nodes: dict[str, TreeNode | None] = {}
    kinds: dict[str, tuple[Op, str | None]] = {}
    edges: list[tuple[str, str]] = []
    for el in pt:
        tag = _local(el.tag)
        if tag == "parentsNode":
            src, dst = el.get("sourceId"), el.get("targetId")
            if src is None or dst is None:
                raise MalformedPtml("parentsNode lacks sourceId/targetId")
            edges.append((src, dst))
            continue
        node_id = el.get("id")
        if node_id is None:
            raise MalformedPtml(f"{tag} element lacks an id")
        if tag == "manualTask":
            kinds[node_id] = (Op.ACTIVITY, el.get("name") or "")
        elif tag == "automaticTask":
            kinds[node_id] = (Op.TAU, None)
        elif tag in _TAG_KIND:
            kinds[node_id] = (_TAG_KIND[tag], None)
        else:
            raise UnknownNodeKind(f"unsupported node element <{tag}>")

    children: dict[str, list[str]] = {nid: [] for nid in kinds}
    for src, dst in edges:
        if src not in kinds or dst not in kinds:
            raise DanglingEdge(f"edge {src}->{dst} references an unknown node")
        children[src].append(dst)
    if root_id not in kinds:
        raise DanglingEdge(f"root {root_id} is not a declared node")

    def build(node_id: str, seen: frozenset[str]) -> TreeNode:
        if node_id in seen:
            raise MalformedPtml(f"cycle through node {node_id}")
        kind, label = kinds[node_id]
        kids = tuple(build(c, seen | {node_id}) for c in children[node_id])
        if kind is Op.ACTIVITY:
            if kids:
                raise MalformedPtml(f"manualTask {node_id} has children")
            return TreeNode(kind, label=label)
        if kind is Op.TAU:
            if kids:
                raise MalformedPtml(f"automaticTask {node_id} has children")
            return TreeNode(kind)
        return TreeNode(kind, children=kids)

    return build(root_id, frozenset())
