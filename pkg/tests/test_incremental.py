import random

import pytest

from treedisc.alignment import is_fitting
from treedisc.errors import InconsistentInput, InvalidTree, TraceFits
from treedisc.incremental import add_trace, locate_deviation_scope
from treedisc.miner import discover
from treedisc.tree import (
    Op,
    TreeNode,
    activity,
    iter_nodes,
    node_at,
    seq,
    xor,
)

from gen import random_trace_set


def test_fitting_trace_is_a_no_op():
    model = seq(activity("a"), activity("b"))
    assert add_trace(model, {("a", "b")}, ("a", "b")) is model


def test_extend_with_inserted_activity():
    model = seq(activity("a"), activity("b"))
    extended = add_trace(model, {("a", "b")}, ("a", "c", "b"))
    assert is_fitting(extended, ("a", "b"))
    assert is_fitting(extended, ("a", "c", "b"))


def test_extend_leaf_model_with_repetition():
    extended = add_trace(activity("a"), {("a",)}, ("a", "a"))
    assert is_fitting(extended, ("a",))
    assert is_fitting(extended, ("a", "a"))


def test_precondition_violation():
    model = seq(activity("a"), activity("b"))
    with pytest.raises(InconsistentInput):
        add_trace(model, {("z",)}, ("a", "c", "b"))


def test_invalid_model_rejected():
    broken = TreeNode(Op.LOOP, children=(activity("a"),))
    with pytest.raises(InvalidTree):
        add_trace(broken, set(), ("a",))


def test_scope_of_fitting_trace_raises():
    with pytest.raises(TraceFits):
        locate_deviation_scope(seq(activity("a"), activity("b")), ("a", "b"))


def test_scope_swapped_children_is_root():
    assert locate_deviation_scope(seq(activity("a"), activity("b")), ("b", "a")) == ()


def test_scope_is_contained_in_model():
    model = seq(activity("a"), xor(activity("b"), activity("c")))
    scope = locate_deviation_scope(model, ("a", "d"))
    node_at(model, scope)  # must resolve
    assert not node_at(model, scope).is_leaf()


def test_deviation_inside_inner_block_localizes():
    model = seq(activity("x"), xor(activity("b"), activity("c")), activity("y"))
    extended = add_trace(model, {("x", "b", "y"), ("x", "c", "y")}, ("x", "d", "y"))
    assert is_fitting(extended, ("x", "d", "y"))
    assert is_fitting(extended, ("x", "b", "y"))
    assert is_fitting(extended, ("x", "c", "y"))
    # the surrounding sequence must survive the extension untouched
    assert node_at(extended, (0,)) == activity("x")
    assert node_at(extended, (2,)) == activity("y")


def test_locality_when_no_escalation_happens():
    model = seq(activity("x"), xor(activity("b"), activity("c")), activity("y"))
    scope = locate_deviation_scope(model, ("x", "d", "y"))
    extended = add_trace(model, {("x", "b", "y"), ("x", "c", "y")}, ("x", "d", "y"))
    if scope:  # agreed outside the replaced subtree
        for path, node in iter_nodes(model):
            if path[: len(scope)] != scope:
                assert node_at(extended, path).kind == node.kind


def test_monotone_guarantee_sample():
    rng = random.Random(23)
    for _ in range(15):
        traces = sorted(random_trace_set(rng, max_activities=5, max_variants=6, max_len=6))
        rng.shuffle(traces)
        model = discover({traces[0]})
        added = {traces[0]}
        for trace in traces[1:]:
            model = add_trace(model, added, trace)
            added.add(trace)
            for prior in sorted(added):
                assert is_fitting(model, prior), (sorted(added), prior, model)


def test_multiple_loop_iterations_extension():
    model = seq(activity("s"), activity("a"), activity("t"))
    extended = add_trace(model, {("s", "a", "t")}, ("s", "a", "a", "a", "t"))
    assert is_fitting(extended, ("s", "a", "t"))
    assert is_fitting(extended, ("s", "a", "a", "a", "t"))


def test_repair_happens_deep_inside_the_tree():
    model = seq(activity("a"),
                xor(seq(activity("b1"), activity("b2")), activity("c")))
    added = {("a", "b1", "b2"), ("a", "c")}
    extended = add_trace(model, added, ("a", "b1"))
    for trace in [("a", "b1", "b2"), ("a", "c"), ("a", "b1")]:
        assert is_fitting(extended, trace)
    # untouched regions survive: the leading activity and the other branch
    assert node_at(extended, (0,)) == activity("a")
    assert activity("c") in node_at(extended, (1,)).children


def test_adding_the_empty_trace():
    extended = add_trace(activity("a"), {("a",)}, ())
    assert is_fitting(extended, ())
    assert is_fitting(extended, ("a",))


def test_new_activity_never_seen_before():
    model = discover({("a", "b"), ("a", "c")})
    extended = add_trace(model, {("a", "b"), ("a", "c")}, ("q", "r"))
    for trace in [("a", "b"), ("a", "c"), ("q", "r")]:
        assert is_fitting(extended, trace)
