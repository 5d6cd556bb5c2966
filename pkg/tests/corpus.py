"""Seeded random automata shared by the property and acceptance tests."""

from __future__ import annotations

import random

from ideallang.automata import Dfa, minimize
from ideallang.monoid import MonoidTooLarge, transition_monoid
from ideallang.shapes import check_shape

ALPHABETS = ("a", "ab", "abc")
MONOID_CAP = 512


def random_dfa(rng: random.Random, n: int, alphabet: str) -> Dfa:
    """A complete ``n``-state DFA with uniformly drawn transitions and final states."""
    rows = tuple(tuple(rng.randrange(n) for _ in alphabet) for _ in range(n))
    final = frozenset(q for q in range(n) if rng.random() < 0.4)
    return Dfa(tuple(alphabet), rows, 0, final)


def random_minimal_dfa(rng: random.Random, max_states: int = 6) -> Dfa:
    """A minimal DFA whose size is uniform in ``1..max_states``.

    Uniform random DFAs mostly collapse to one or two states, so a target
    size is drawn first and automata are redrawn until they minimize to it.
    """
    target = rng.randint(1, max_states)
    while True:
        d = minimize(random_dfa(rng, target, rng.choice(ALPHABETS)))
        if d.n == target:
            return d


def minimal_corpus(count: int, seed: int = 2024, cap: int = MONOID_CAP) -> list[Dfa]:
    """``count`` minimal DFAs (at most 6 states, at most 3 letters).

    Automata whose transition monoid exceeds ``cap`` elements are redrawn,
    which keeps the exact identity search cheap.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = random_minimal_dfa(rng)
        try:
            transition_monoid(d, max_size=cap)
        except MonoidTooLarge:
            continue
        out.append(d)
    return out


def random_weak_dfa(rng: random.Random, max_states: int = 6) -> Dfa:
    """A complete DFA whose strongly connected components are all final or all not.

    States are given random ranks; a transition either stays inside the
    rank block or goes to a higher rank, so SCCs lie within blocks, and
    finality is decided per block.
    """
    alphabet = rng.choice(ALPHABETS[1:])
    n = rng.randint(1, max_states)
    rank = sorted(rng.randrange(3) for _ in range(n))
    final_rank = {r: rng.random() < 0.5 for r in set(rank)}
    rows = []
    for q in range(n):
        ahead = [p for p in range(n) if rank[p] >= rank[q]]
        rows.append(tuple(rng.choice(ahead) for _ in alphabet))
    d = Dfa(tuple(alphabet), tuple(rows), 0, frozenset(q for q in range(n) if final_rank[rank[q]]))
    assert check_shape(d, "weak")
    return d


def weak_corpus(count: int, seed: int = 7) -> list[Dfa]:
    rng = random.Random(seed)
    return [random_weak_dfa(rng) for _ in range(count)]
