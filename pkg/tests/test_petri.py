import random
import xml.etree.ElementTree as ET

import pytest

from treedisc.errors import InvalidTree, NotEnabled
from treedisc.petri import Marking, enabled, fire, serialize_pnml, tree_to_petri_net
from treedisc.tree import TreeNode, Op, activity, enumerate_language, loop, par, seq, tau, xor

from gen import random_tree
from oracles import net_visible_language


def test_single_activity_net_shape():
    net = tree_to_petri_net(activity("a"))
    assert len(net.places) == 2
    assert len(net.transitions) == 1
    assert len(net.arcs) == 2
    (t,) = net.transitions
    assert net.label[t] == "a"


def test_parallel_net_shape_and_language():
    net = tree_to_petri_net(par(activity("a"), activity("b")))
    assert sum(1 for l in net.label.values() if l is None) == 2  # split + join
    assert len(net.places) == 6
    assert net_visible_language(net, 2) == {("a", "b"), ("b", "a")}


def test_loop_net_language():
    net = tree_to_petri_net(loop(activity("a"), activity("b")))
    expected = {("a",), ("a", "b", "a"), ("a", "b", "a", "b", "a")}
    assert net_visible_language(net, 5) == expected
    assert enumerate_language(loop(activity("a"), activity("b")), 5) == expected


def test_invalid_tree_rejected():
    with pytest.raises(InvalidTree):
        tree_to_petri_net(TreeNode(Op.LOOP, children=(activity("a"),)))


def test_enabled_and_fire_single_activity():
    net = tree_to_petri_net(activity("a"))
    marking = net.initial_marking
    (t,) = net.transitions
    assert enabled(net, marking) == {t}
    after = fire(net, marking, t)
    assert after == net.final_marking
    with pytest.raises(NotEnabled):
        fire(net, after, t)


def test_fire_conserves_tokens_per_arc():
    net = tree_to_petri_net(seq(activity("a"), activity("b")))
    marking = net.initial_marking
    for _ in range(2):
        (t,) = enabled(net, marking)
        after = fire(net, marking, t)
        assert marking.total() - len(net.preset[t]) + len(net.postset[t]) == after.total()
        marking = after
    assert marking == net.final_marking


def test_replaying_an_accepted_word_reaches_the_sink():
    tree = seq(activity("a"), xor(activity("b"), tau()), activity("c"))
    net = tree_to_petri_net(tree)
    word = ("a", "b", "c")
    assert word in enumerate_language(tree, 3)
    # greedy replay: fire the sync transition if possible, else any silent one
    marking, remaining = net.initial_marking, list(word)
    for _ in range(50):
        if marking == net.final_marking and not remaining:
            break
        options = enabled(net, marking)
        visible = [t for t in options if remaining and net.label[t] == remaining[0]]
        if visible:
            marking = fire(net, marking, visible[0])
            remaining.pop(0)
            continue
        silent = [t for t in sorted(options) if net.label[t] is None]
        assert silent, "replay got stuck"
        marking = fire(net, marking, silent[0])
    assert marking == net.final_marking and not remaining


def _structural_wf_check(net):
    assert all(dst != net.source for _, dst in net.arcs)
    assert all(src != net.sink for src, _ in net.arcs)
    # every node reachable from source and co-reachable from sink
    forward: dict[str, set[str]] = {}
    backward: dict[str, set[str]] = {}
    for a, b in net.arcs:
        forward.setdefault(a, set()).add(b)
        backward.setdefault(b, set()).add(a)
    nodes = set(net.places) | set(net.transitions)

    def closure(start, adj):
        seen, stack = {start}, [start]
        while stack:
            for nxt in adj.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    assert closure(net.source, forward) == nodes
    assert closure(net.sink, backward) == nodes


def test_wf_structure_on_random_trees(rng):
    for _ in range(30):
        _structural_wf_check(tree_to_petri_net(random_tree(rng, ("a", "b", "c"), max_depth=3)))


def test_language_equivalence_sample(rng):
    for _ in range(15):
        tree = random_tree(rng, ("a", "b", "c"), max_depth=3)
        assert net_visible_language(tree_to_petri_net(tree), 6) == enumerate_language(tree, 6)


def test_token_count_bounded_by_parallel_branches(rng):
    from treedisc.tree import iter_nodes

    for _ in range(20):
        tree = random_tree(rng, ("a", "b", "c"), max_depth=3)
        bound = 1 + sum(len(n.children) - 1 for _, n in iter_nodes(tree) if n.kind is Op.AND)
        net = tree_to_petri_net(tree)
        seen = {net.initial_marking}
        frontier = [net.initial_marking]
        while frontier and len(seen) < 20_000:
            marking = frontier.pop()
            assert marking.total() <= bound, (tree, marking)
            for t in enabled(net, marking):
                nxt = fire(net, marking, t)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)


def test_marking_value_type():
    m = Marking.of("p", "p", "q")
    assert m.count("p") == 2 and m.count("q") == 1 and m.count("r") == 0
    assert m == Marking.of("q", "p", "p")
    assert m.total() == 3


# --- PNML ---------------------------------------------------------------


def test_pnml_single_named_transition():
    data = serialize_pnml(tree_to_petri_net(activity("a")))
    root = ET.fromstring(data)
    names = [t.findtext("name/text") for t in root.iter("transition")]
    assert names == ["a"]


def test_pnml_silent_transitions_have_no_name():
    data = serialize_pnml(tree_to_petri_net(par(activity("a"), activity("b"))))
    root = ET.fromstring(data)
    named = [t for t in root.iter("transition") if t.find("name") is not None]
    unnamed = [t for t in root.iter("transition") if t.find("name") is None]
    assert len(named) == 2 and len(unnamed) == 2


def test_pnml_source_sink_convention():
    net = tree_to_petri_net(seq(activity("a"), activity("b")))
    root = ET.fromstring(serialize_pnml(net))
    initial = [p.get("id") for p in root.iter("place") if p.find("initialMarking") is not None]
    assert initial == [net.source]
    finals = root.findall(".//finalmarkings/marking/place")
    assert [(p.get("idref"), p.findtext("text")) for p in finals] == [(net.sink, "1")]
