"""Seeded random generators for trees, traces and trace sets."""

from __future__ import annotations

import random
import string
from typing import Sequence

from treedisc.tree import TreeNode, activity, enumerate_language, loop, par, seq, tau, xor

DEFAULT_ALPHABET = tuple(string.ascii_lowercase[:8])


def random_tree(rng: random.Random, alphabet: Sequence[str] = DEFAULT_ALPHABET,
                max_depth: int = 4, max_children: int = 3,
                tau_weight: float = 0.15) -> TreeNode:
    """A structurally valid random tree (loops always get two children)."""
    if max_depth <= 0 or rng.random() < 0.35:
        if rng.random() < tau_weight:
            return tau()
        return activity(rng.choice(alphabet))
    kind = rng.choice(("seq", "xor", "par", "loop"))
    if kind == "loop":
        return loop(random_tree(rng, alphabet, max_depth - 1, max_children),
                    random_tree(rng, alphabet, max_depth - 1, max_children))
    n = rng.randint(2, max_children)
    children = tuple(random_tree(rng, alphabet, max_depth - 1, max_children)
                     for _ in range(n))
    return {"seq": seq, "xor": xor, "par": par}[kind](*children)


def random_trace(rng: random.Random, alphabet: Sequence[str], max_len: int) -> tuple[str, ...]:
    return tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))


def random_trace_set(rng: random.Random, max_activities: int = 8,
                     max_variants: int = 20, max_len: int = 10) -> set[tuple[str, ...]]:
    alphabet = DEFAULT_ALPHABET[: rng.randint(1, max_activities)]
    n = rng.randint(1, max_variants)
    traces = {random_trace(rng, alphabet, max_len) for _ in range(n)}
    if not traces:
        traces = {()}
    return traces


def sample_fitting_trace(rng: random.Random, tree: TreeNode,
                         max_len: int = 8) -> tuple[str, ...] | None:
    words = sorted(enumerate_language(tree, max_len))
    return rng.choice(words) if words else None
