"""Incremental discovery: grow a tree by one trace while keeping the rest.

Strategy: align the new trace against the current model, locate the
smallest subtree covering all deviations, rediscover just that subtree
from the previously added traces' (and the new trace's) behavior routed
through it, splice the result in, and verify the full contract with
alignments. If verification fails the scope widens to the parent until,
in the worst case, the whole model is rediscovered from scratch, which
always satisfies the contract thanks to the miner's fitness guarantee.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .alignment import Alignment, Move, MoveKind, align
from .errors import InconsistentInput, TraceFits
from .miner import discover
from .petri import LabeledPetriNet, tree_to_petri_net
from .tree import NodePath, TreeNode, node_at, replace_at, validation_errors
from .errors import InvalidTree

Word = tuple[str, ...]


def _common_prefix(paths: list[NodePath]) -> NodePath:
    if not paths:
        return ()
    prefix = paths[0]
    for path in paths[1:]:
        limit = min(len(prefix), len(path))
        i = 0
        while i < limit and prefix[i] == path[i]:
            i += 1
        prefix = prefix[:i]
    return prefix


def _scope_of_alignment(net: LabeledPetriNet, alignment: Alignment) -> NodePath:
    """Deepest tree path containing every deviation of the alignment.

    Visible model moves pin their transition's origin; log moves have no
    transition, so they pin the origins of the places currently marked,
    i.e. the model region active while the unexplained activity happened.
    """
    contributions: list[NodePath] = []
    marking = dict(net.initial_marking.items)
    for move in alignment.moves:
        if move.kind is MoveKind.LOG:
            contributions.extend(net.place_origin[p] for p, n in marking.items() if n > 0)
            continue
        t = move.transition
        assert t is not None
        if move.kind is MoveKind.MODEL and net.label[t] is not None:
            contributions.append(net.transition_origin[t])
        for p in net.preset[t]:
            marking[p] -= 1
        for p in net.postset[t]:
            marking[p] = marking.get(p, 0) + 1
    return _common_prefix(contributions)


def locate_deviation_scope(model: TreeNode, trace: Sequence[str]) -> NodePath:
    """Path of the lowest subtree the trace's deviations fall into."""
    net = tree_to_petri_net(model)
    alignment = align(net, trace)
    if alignment.cost == 0:
        raise TraceFits("the trace already fits the model")
    scope = _scope_of_alignment(net, alignment)
    while scope and node_at(model, scope).is_leaf():
        scope = scope[:-1]  # rediscovering a single leaf can never help
    return scope


def _is_inside(origin: NodePath, path: NodePath) -> bool:
    return origin[:len(path)] == path


def _segments_through(net: LabeledPetriNet, alignment: Alignment,
                      path: NodePath) -> list[Word]:
    """Log activity runs emitted per traversal of the subtree at ``path``.

    Replays the alignment's model side and cuts the log side at the points
    where the block is entered and fully left (no tokens remain on places
    created inside it, so interleaved parallel branches do not split a
    traversal). Log moves outside any traversal attach to the following
    one, trailing ones to the last; misattributions are caught later by
    the caller's verification pass.
    """
    inside_place = {p: _is_inside(net.place_origin[p], path) for p in net.places}
    marking = dict(net.initial_marking.items)
    inside_tokens = 0
    active = False
    segment: list[str] = []
    pending: list[str] = []
    segments: list[Word] = []

    for move in alignment.moves:
        if move.kind is MoveKind.LOG:
            assert move.log_activity is not None
            (segment if active else pending).append(move.log_activity)
            continue
        t = move.transition
        assert t is not None
        inside = _is_inside(net.transition_origin[t], path)
        if inside and not active:
            active = True
            segment = pending
            pending = []
        elif active and not inside and inside_tokens == 0:
            segments.append(tuple(segment))
            segment = []
            active = False
        if move.kind is MoveKind.SYNCHRONOUS and inside:
            assert move.log_activity is not None
            segment.append(move.log_activity)
        for p in net.preset[t]:
            marking[p] -= 1
            if inside_place[p]:
                inside_tokens -= 1
        for p in net.postset[t]:
            marking[p] = marking.get(p, 0) + 1
            if inside_place[p]:
                inside_tokens += 1

    if active:
        segments.append(tuple(segment))
    if pending and segments:
        segments[-1] = segments[-1] + tuple(pending)
    return segments


def _ancestor_chain(path: NodePath) -> list[NodePath]:
    return [path[:i] for i in range(len(path), -1, -1)]


def add_trace(model: TreeNode, previously_added: Iterable[Sequence[str]],
              new_trace: Sequence[str]) -> TreeNode:
    """Return a model accepting ``new_trace`` plus everything added before.

    The input model is never mutated. If the trace already fits, the model
    is returned unchanged; otherwise exactly one subtree (possibly the
    root) is replaced by a rediscovered one.
    """
    errors = validation_errors(model)
    if errors:
        raise InvalidTree(f"{errors[0].code} at {list(errors[0].path)}")
    net = tree_to_petri_net(model)
    previous = sorted({tuple(t) for t in previously_added})
    alignments: dict[Word, Alignment] = {}
    for trace in previous:
        alignments[trace] = align(net, trace)
        if alignments[trace].cost != 0:
            raise InconsistentInput(
                f"previously added trace {list(trace)} no longer fits the model")

    new_word = tuple(new_trace)
    new_alignment = align(net, new_word)
    if new_alignment.cost == 0:
        return model
    alignments[new_word] = new_alignment

    scope = _scope_of_alignment(net, new_alignment)
    while scope and node_at(model, scope).is_leaf():
        scope = scope[:-1]

    all_traces = sorted(set(previous) | {new_word})
    for path in _ancestor_chain(scope):
        if path == ():
            candidate = discover(all_traces)
        else:
            sublog: set[Word] = set()
            for trace in all_traces:
                sublog.update(_segments_through(net, alignments[trace], path))
            if not sublog:
                continue
            candidate = replace_at(model, path, discover(sublog))
        candidate_net = tree_to_petri_net(candidate)
        if all(align(candidate_net, trace).cost == 0 for trace in all_traces):
            return candidate

    raise AssertionError("unreachable: root rediscovery always fits")
