import random

import pytest

from treedisc.alignment import is_fitting
from treedisc.errors import EmptyInput, EmptySelection
from treedisc.eventlog import TraceVariant
from treedisc.miner import build_dfg, discover, discover_from_variants
from treedisc.tree import accepts, activity, par, seq, tau, validate, xor

from gen import random_trace_set


def test_build_dfg_single_trace():
    dfg = build_dfg({("a", "b")})
    assert dfg.edges == {("a", "b")}
    assert dfg.start_activities == {"a"}
    assert dfg.end_activities == {"b"}
    assert not dfg.contains_empty_trace


def test_build_dfg_two_orders():
    dfg = build_dfg({("a", "b"), ("b", "a")})
    assert dfg.edges == {("a", "b"), ("b", "a")}
    assert dfg.start_activities == {"a", "b"}
    assert dfg.end_activities == {"a", "b"}


def test_build_dfg_empty_trace():
    dfg = build_dfg({()})
    assert dfg.activities == frozenset()
    assert dfg.contains_empty_trace


def test_discover_base_cases():
    assert discover({("a",)}) == activity("a")
    assert discover({()}) == tau()
    assert discover({("a",), ()}) == xor(activity("a"), tau())


def test_discover_parallel_cut():
    assert discover({("a", "b"), ("b", "a")}) == par(activity("a"), activity("b"))


def test_discover_sequence_then_choice():
    assert discover({("a", "b"), ("a", "c")}) == seq(activity("a"), xor(activity("b"), activity("c")))


def test_discover_sequence_with_parallel_block():
    # hand-run: sequence cut a | {b,c}, then parallel cut {b} | {c}
    assert discover({("a", "b", "c"), ("a", "c", "b")}) == \
        seq(activity("a"), par(activity("b"), activity("c")))


def test_discover_choice_between_sequence_positions():
    # hand-run: sequence cut a | {b,c} | d, then exclusive cut b | c
    assert discover({("a", "b", "d"), ("a", "c", "d")}) == \
        seq(activity("a"), xor(activity("b"), activity("c")), activity("d"))


def test_discover_loop_with_sequential_redo():
    # hand-run: loop cut do={a} (start+end), redo={b,c}; redo recurses to →(b,c)
    from treedisc.tree import loop, seq as seq_

    assert discover({("a", "b", "c", "a")}) == \
        loop(activity("a"), seq_(activity("b"), activity("c")))


def test_discover_parallel_with_optional_branch():
    # hand-run: parallel cut {a} | {b}; the b-projection of ⟨a⟩ is empty
    from treedisc.tree import tau as tau_

    assert discover({("a", "b"), ("b", "a"), ("a",)}) == \
        par(activity("a"), xor(activity("b"), tau_()))


def test_discover_single_variant_sequence():
    assert discover_from_variants([TraceVariant(0, ("a", "b"), 1, ("c",))]) == \
        seq(activity("a"), activity("b"))


def test_discover_duplicate_selection_idempotent():
    one = discover_from_variants([TraceVariant(0, ("a", "b"), 3, ("x", "y", "z"))])
    two = discover_from_variants([
        TraceVariant(0, ("a", "b"), 3, ("x", "y", "z")),
        TraceVariant(1, ("a", "b"), 1, ("w",)),
    ])
    assert one == two


def test_discover_empty_inputs():
    with pytest.raises(EmptyInput):
        discover(set())
    with pytest.raises(EmptySelection):
        discover_from_variants([])


def test_discover_is_deterministic():
    traces = {("a", "c", "b"), ("b", "c"), ("c", "a"), ()}
    trees = {discover(traces) for _ in range(5)}
    assert len(trees) == 1


def test_discover_flower_fallthrough_fits():
    # No cut exists here: every activity follows every other one.
    traces = {("a", "b", "a"), ("b", "a", "b"), ("a", "a"), ("b",)}
    tree = discover(traces)
    assert validate(tree) == []
    for trace in traces:
        assert accepts(tree, trace)


def test_discover_fitness_property_sample():
    rng = random.Random(11)
    for _ in range(30):
        traces = random_trace_set(rng, max_activities=6, max_variants=10, max_len=8)
        tree = discover(traces)
        assert validate(tree) == []
        for trace in sorted(traces):
            assert accepts(tree, trace), (sorted(traces), trace, tree)


def test_discover_fitness_via_alignments_sample():
    rng = random.Random(12)
    for _ in range(10):
        traces = random_trace_set(rng, max_activities=5, max_variants=6, max_len=6)
        tree = discover(traces)
        for trace in sorted(traces):
            assert is_fitting(tree, trace)
