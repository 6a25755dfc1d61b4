"""Optimal trace/model alignments over workflow nets.

The search runs A* on the synchronous product of the net and the trace.
States are (marking, trace position); the admissible heuristic counts the
remaining trace activities that no transition in the net can ever match,
each of which forces a log move. Costs follow the standard unit scheme:
synchronous and silent-model moves are free, every other move costs 1.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from itertools import count
from typing import Sequence

from .errors import SearchBudgetExceeded
from .petri import LabeledPetriNet, Marking, tree_to_petri_net
from .tree import TreeNode

DEFAULT_STATE_CAP = 1_000_000


class MoveKind(str, Enum):
    SYNCHRONOUS = "synchronous"
    LOG = "log_move"
    MODEL = "model_move"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    log_activity: str | None = None
    transition: str | None = None


@dataclass(frozen=True)
class Alignment:
    moves: tuple[Move, ...]
    cost: int

    def log_projection(self) -> tuple[str, ...]:
        return tuple(m.log_activity for m in self.moves if m.log_activity is not None)

    def model_projection(self) -> tuple[str, ...]:
        return tuple(m.transition for m in self.moves if m.transition is not None)


def align(net: LabeledPetriNet, trace: Sequence[str],
          state_cap: int = DEFAULT_STATE_CAP) -> Alignment:
    """Cost-minimal alignment of ``trace`` against ``net``.

    Raises SearchBudgetExceeded once ``state_cap`` states were expanded;
    callers must report "unknown" rather than guessing a verdict.
    """
    trace = tuple(trace)
    n = len(trace)
    visible = net.visible_labels()

    # h(i): log moves forced by activities the net cannot produce at all.
    unmatched_suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        unmatched_suffix[i] = unmatched_suffix[i + 1] + (trace[i] not in visible)

    transitions = sorted(net.transitions)
    preset = net.preset
    postset = net.postset
    label = net.label

    def fire_counts(counts: dict[str, int], t: str) -> tuple[tuple[str, int], ...]:
        local = dict(counts)
        for p in preset[t]:
            local[p] -= 1
            if local[p] == 0:
                del local[p]
        for p in postset[t]:
            local[p] = local.get(p, 0) + 1
        return tuple(sorted(local.items()))

    start = (net.initial_marking.items, 0)
    goal_marking = net.final_marking.items
    tie = count()
    open_heap: list[tuple[int, int, tuple]] = [(unmatched_suffix[0], next(tie), start)]
    g_score: dict[tuple, int] = {start: 0}
    parent: dict[tuple, tuple[tuple, Move]] = {}
    closed: set[tuple] = set()
    expanded = 0

    while open_heap:
        f, _, state = heapq.heappop(open_heap)
        if state in closed:
            continue
        marking_items, pos = state
        g = g_score[state]
        if pos == n and marking_items == goal_marking:
            moves: list[Move] = []
            cur = state
            while cur in parent:
                cur, move = parent[cur]
                moves.append(move)
            moves.reverse()
            return Alignment(tuple(moves), g)
        closed.add(state)
        expanded += 1
        if expanded > state_cap:
            raise SearchBudgetExceeded(f"alignment search expanded more than {state_cap} states")

        counts = dict(marking_items)
        fireable = [t for t in transitions
                    if all(counts.get(p, 0) >= 1 for p in preset[t])]

        # Successor order encodes the tie preference at equal f-score:
        # synchronous, then silent model, visible model, log move.
        succs: list[tuple[int, tuple, Move]] = []
        if pos < n:
            for t in fireable:
                if label[t] == trace[pos]:
                    succs.append((0, (fire_counts(counts, t), pos + 1),
                                  Move(MoveKind.SYNCHRONOUS, trace[pos], t)))
        for t in fireable:
            if label[t] is None:
                succs.append((0, (fire_counts(counts, t), pos),
                              Move(MoveKind.MODEL, None, t)))
        for t in fireable:
            if label[t] is not None:
                succs.append((1, (fire_counts(counts, t), pos),
                              Move(MoveKind.MODEL, None, t)))
        if pos < n:
            succs.append((1, (marking_items, pos + 1),
                          Move(MoveKind.LOG, trace[pos], None)))

        for step_cost, nxt, move in succs:
            tentative = g + step_cost
            if tentative < g_score.get(nxt, tentative + 1):
                g_score[nxt] = tentative
                parent[nxt] = (state, move)
                heapq.heappush(open_heap, (tentative + unmatched_suffix[nxt[1]], next(tie), nxt))

    raise SearchBudgetExceeded("alignment search exhausted the state space without a goal")


def is_fitting(tree: TreeNode, trace: Sequence[str],
               state_cap: int = DEFAULT_STATE_CAP) -> bool:
    """True iff the trace aligns at cost zero, i.e. the model accepts it."""
    return align(tree_to_petri_net(tree), trace, state_cap=state_cap).cost == 0


def conformance_report(tree: TreeNode, variants,
                       state_cap: int = DEFAULT_STATE_CAP) -> list[tuple[int, bool | None]]:
    """Per-variant acceptance verdicts; None means the search gave up."""
    net = tree_to_petri_net(tree)
    report: list[tuple[int, bool | None]] = []
    for variant in variants:
        try:
            verdict: bool | None = align(net, variant.activities, state_cap=state_cap).cost == 0
        except SearchBudgetExceeded:
            verdict = None
        report.append((variant.variant_id, verdict))
    report.sort(key=lambda row: row[0])
    return report
