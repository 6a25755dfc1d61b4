"""Process discovery: recursive cut detection over the directly-follows graph.

The discovered tree is guaranteed to replay every input trace. Cuts are
tried in the order exclusive choice, sequence, parallel, loop; when none
applies the recursion falls through to a flower loop over the remaining
alphabet, which accepts any non-empty interleaving and so keeps the
fitness guarantee unconditional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptyInput, EmptySelection
from .eventlog import TraceVariant
from .tree import TreeNode, activity, loop, par, seq, tau, xor

Word = tuple[str, ...]


@dataclass(frozen=True)
class Dfg:
    activities: frozenset[str]
    edges: frozenset[tuple[str, str]]
    start_activities: frozenset[str]
    end_activities: frozenset[str]
    contains_empty_trace: bool


def build_dfg(traces: Iterable[Sequence[str]]) -> Dfg:
    """Directly-follows abstraction: an edge per adjacent activity pair."""
    activities: set[str] = set()
    edges: set[tuple[str, str]] = set()
    starts: set[str] = set()
    ends: set[str] = set()
    has_empty = False
    for trace in traces:
        trace = tuple(trace)
        if not trace:
            has_empty = True
            continue
        activities.update(trace)
        starts.add(trace[0])
        ends.add(trace[-1])
        for a, b in zip(trace, trace[1:]):
            edges.add((a, b))
    return Dfg(frozenset(activities), frozenset(edges),
               frozenset(starts), frozenset(ends), has_empty)


def _components(nodes: set[str], undirected: set[tuple[str, str]]) -> list[tuple[str, ...]]:
    """Connected components, each sorted, ordered by smallest member."""
    adjacency: dict[str, set[str]] = {n: set() for n in nodes}
    for a, b in undirected:
        if a in adjacency and b in adjacency:
            adjacency[a].add(b)
            adjacency[b].add(a)
    seen: set[str] = set()
    comps: list[tuple[str, ...]] = []
    for node in sorted(nodes):
        if node in seen:
            continue
        stack, comp = [node], set()
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(adjacency[cur] - comp)
        seen |= comp
        comps.append(tuple(sorted(comp)))
    return sorted(comps, key=lambda c: c[0])


def _reachability(activities: frozenset[str], edges: frozenset[tuple[str, str]]
                  ) -> dict[str, set[str]]:
    succ: dict[str, set[str]] = {a: set() for a in activities}
    for a, b in edges:
        succ[a].add(b)
    reach: dict[str, set[str]] = {}
    for a in activities:
        seen: set[str] = set()
        stack = list(succ[a])
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(succ[cur] - seen)
        reach[a] = seen
    return reach


# --- cut detection ------------------------------------------------------


def _xor_cut(dfg: Dfg) -> list[tuple[str, ...]] | None:
    comps = _components(set(dfg.activities), {(a, b) for a, b in dfg.edges})
    return comps if len(comps) > 1 else None


def _sequence_cut(dfg: Dfg) -> list[tuple[str, ...]] | None:
    acts = sorted(dfg.activities)
    reach = _reachability(dfg.activities, dfg.edges)
    parent = {a: a for a in acts}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: str, y: str) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    # Merge mutually reachable pairs (loops) and mutually unreachable pairs
    # (no order between them); the remaining classes are totally ordered.
    for i, a in enumerate(acts):
        for b in acts[i + 1:]:
            forward = b in reach[a]
            backward = a in reach[b]
            if forward == backward:
                union(a, b)

    groups: dict[str, list[str]] = {}
    for a in acts:
        groups.setdefault(find(a), []).append(a)
    classes = [tuple(sorted(g)) for g in groups.values()]
    if len(classes) < 2:
        return None

    def predecessors(cls: tuple[str, ...]) -> int:
        return sum(1 for other in classes
                   if other != cls and cls[0] in reach[other[0]])

    return sorted(classes, key=predecessors)


def _parallel_cut(dfg: Dfg) -> list[tuple[str, ...]] | None:
    acts = set(dfg.activities)
    non_parallel = set()
    for a in acts:
        for b in acts:
            if a < b and not ((a, b) in dfg.edges and (b, a) in dfg.edges):
                non_parallel.add((a, b))
    classes = _components(acts, non_parallel)
    if len(classes) < 2:
        return None

    def valid(cls: tuple[str, ...]) -> bool:
        members = set(cls)
        return bool(members & dfg.start_activities) and bool(members & dfg.end_activities)

    # Every class needs a start and an end activity; offenders are merged
    # with a neighbouring class, which preserves pairwise bidirectionality.
    while len(classes) > 1:
        bad = next((i for i, c in enumerate(classes) if not valid(c)), None)
        if bad is None:
            break
        other = bad + 1 if bad + 1 < len(classes) else bad - 1
        merged = tuple(sorted(classes[bad] + classes[other]))
        classes = [c for i, c in enumerate(classes) if i not in (bad, other)]
        classes.append(merged)
        classes.sort(key=lambda c: c[0])
    if len(classes) < 2 or not all(valid(c) for c in classes):
        return None
    return classes


def _loop_cut(dfg: Dfg) -> tuple[tuple[str, ...], tuple[str, ...]] | None:
    boundary = set(dfg.start_activities | dfg.end_activities)
    rest = set(dfg.activities) - boundary
    if not rest:
        return None
    inner_edges = {(a, b) for a, b in dfg.edges if a in rest and b in rest}
    redo: set[str] = set()
    for comp in _components(rest, inner_edges):
        members = set(comp)
        entries = {y for x, y in dfg.edges if x not in members and y in members}
        exits = {y for y, x in dfg.edges if y in members and x not in members}
        ok = all(x in dfg.end_activities
                 for x, y in dfg.edges if x not in members and y in members)
        ok = ok and all(x in dfg.start_activities
                        for y, x in dfg.edges if y in members and x not in members)
        # The loop may restart after any redo: entries must be reachable
        # from every end activity, exits must reach every start activity.
        ok = ok and all((e, y) in dfg.edges for y in entries for e in dfg.end_activities)
        ok = ok and all((y, s) in dfg.edges for y in exits for s in dfg.start_activities)
        if ok:
            redo |= members
    if not redo:
        return None
    do = tuple(sorted(set(dfg.activities) - redo))
    return do, tuple(sorted(redo))


# --- log splitting ------------------------------------------------------


def _split_xor(traces: set[Word], classes: list[tuple[str, ...]]) -> list[set[Word]]:
    index = {a: i for i, cls in enumerate(classes) for a in cls}
    sublogs: list[set[Word]] = [set() for _ in classes]
    for trace in traces:
        sublogs[index[trace[0]]].add(trace)
    return sublogs


def _split_sequence(traces: set[Word], classes: list[tuple[str, ...]]) -> list[set[Word]]:
    index = {a: i for i, cls in enumerate(classes) for a in cls}
    sublogs: list[set[Word]] = [set() for _ in classes]
    for trace in traces:
        positions = [index[a] for a in trace]
        assert positions == sorted(positions), "sequence cut classes interleave"
        for i in range(len(classes)):
            sublogs[i].add(tuple(a for a in trace if index[a] == i))
    return sublogs


def _split_parallel(traces: set[Word], classes: list[tuple[str, ...]]) -> list[set[Word]]:
    sublogs: list[set[Word]] = []
    for cls in classes:
        members = set(cls)
        sublogs.append({tuple(a for a in trace if a in members) for trace in traces})
    return sublogs


def _split_loop(traces: set[Word], do: tuple[str, ...], redo: tuple[str, ...]
                ) -> tuple[set[Word], set[Word]]:
    do_set = set(do)
    do_log: set[Word] = set()
    redo_log: set[Word] = set()
    for trace in traces:
        runs: list[tuple[bool, list[str]]] = []
        for act in trace:
            in_do = act in do_set
            if runs and runs[-1][0] == in_do:
                runs[-1][1].append(act)
            else:
                runs.append((in_do, [act]))
        assert runs[0][0] and runs[-1][0], "loop cut run does not start/end in the do-part"
        for in_do, run in runs:
            (do_log if in_do else redo_log).add(tuple(run))
    return do_log, redo_log


# --- recursion ----------------------------------------------------------


def _flower(alphabet: list[str]) -> TreeNode:
    leaves = [activity(a) for a in alphabet]
    body = leaves[0] if len(leaves) == 1 else xor(*leaves)
    return loop(body, tau())


def _discover(traces: set[Word]) -> TreeNode:
    if all(not t for t in traces):
        return tau()
    if () in traces:
        return xor(_discover({t for t in traces if t}), tau())

    alphabet = sorted({a for t in traces for a in t})
    if len(alphabet) == 1 and traces == {(alphabet[0],)}:
        return activity(alphabet[0])

    dfg = build_dfg(traces)

    classes = _xor_cut(dfg)
    if classes:
        return xor(*(_discover(sub) for sub in _split_xor(traces, classes)))

    classes = _sequence_cut(dfg)
    if classes:
        return seq(*(_discover(sub) for sub in _split_sequence(traces, classes)))

    classes = _parallel_cut(dfg)
    if classes:
        return par(*(_discover(sub) for sub in _split_parallel(traces, classes)))

    cut = _loop_cut(dfg)
    if cut:
        do_log, redo_log = _split_loop(traces, *cut)
        return loop(_discover(do_log), _discover(redo_log))

    return _flower(alphabet)


def discover(traces: Iterable[Sequence[str]]) -> TreeNode:
    """Discover a process tree accepting every trace in ``traces``."""
    normalized = {tuple(t) for t in traces}
    if not normalized:
        raise EmptyInput("cannot discover a model from zero traces")
    return _discover(normalized)


def discover_from_variants(variants: Iterable[TraceVariant]) -> TreeNode:
    """Discover from the activity sequences of the selected variants."""
    sequences = {v.activities for v in variants}
    if not sequences:
        raise EmptySelection("no variants selected")
    return discover(sequences)
