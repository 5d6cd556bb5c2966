"""Staiger-Wagner automata, weak NFAs, flip unions and the R-class decomposition."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ._graph import component_map, condensation_reach, tarjan
from .automata import (
    AlphabetError,
    Automaton,
    Dfa,
    Nfa,
    _check_word,
    accessible,
    as_dfa,
    combine,
    equivalent,
    from_json as automaton_from_json,
    is_deterministic,
    make_alphabet,
    minimize,
    to_json as automaton_to_json,
    to_minimal_dfa,
    union_all,
)
from .monoid import green_classes, is_union_of_classes, preimage_dfa, syntactic_monoid
from .shapes import check_shape, shape_violation

EXTENSIONAL_LIMIT = 16
LAZY_LIMIT = 24


class NotWeakError(ValueError):
    pass


def _bits(mask: int) -> list[int]:
    return [q for q in range(mask.bit_length()) if mask >> q & 1]


@dataclass(frozen=True)
class StaigerWagnerAutomaton:
    """An automaton accepting a run iff its set of visited states is in the table.

    The table is either ``masks`` (a frozenset of state bitmasks) or, for
    large automata built by :func:`to_staiger_wagner`, the rule ``rule``: a
    tuple of ``(q, future_mask)`` and ``T`` is in the table iff some ``q``
    lies in ``T`` while ``T`` avoids ``future_mask``.
    """

    alphabet: tuple[str, ...]
    n: int
    transitions: frozenset[tuple[int, str, int]]
    initial: frozenset[int]
    masks: frozenset[int] | None = None
    rule: tuple[tuple[int, int], ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        Nfa(self.alphabet, self.n, self.transitions, self.initial, frozenset(), self.names)
        if (self.masks is None) == (self.rule is None):
            raise ValueError("give exactly one of masks or rule")
        if self.masks is not None and any(m < 0 or m >> self.n for m in self.masks):
            raise ValueError("table entries must be subsets of the state set")

    @property
    def nfa(self) -> Nfa:
        return Nfa(self.alphabet, self.n, self.transitions, self.initial, frozenset(), self.names)

    def in_table(self, mask: int) -> bool:
        if self.masks is not None:
            return mask in self.masks
        return any(mask >> q & 1 and not mask & fut for q, fut in self.rule)

    @property
    def table(self) -> list[frozenset[int]]:
        """The table as sets of states, smallest masks first."""
        if self.masks is None:
            raise ValueError(f"table of a {self.n}-state automaton is kept as a rule")
        return [frozenset(_bits(m)) for m in sorted(self.masks)]

    def name(self, q: int) -> str:
        return self.names[q] if self.names is not None else str(q)


def future_masks(a: Automaton) -> list[int]:
    """Per state, the bitmask of states reachable from it outside its own SCC."""
    graph = a.graph
    comps = tarjan(a.n, graph.__getitem__)
    comp_of = component_map(a.n, comps)
    reach = condensation_reach(comps, comp_of, graph.__getitem__)
    comp_mask = [sum(1 << q for q in c) for c in comps]
    out = []
    for q in range(a.n):
        c = comp_of[q]
        bits = reach[c] & ~(1 << c)
        mask = 0
        for d in _bits(bits):
            mask |= comp_mask[d]
        out.append(mask)
    return out


def to_staiger_wagner(a: Automaton) -> StaigerWagnerAutomaton:
    """Keep the transition structure; accept visited sets that stop in a final SCC."""
    bad = shape_violation(a, "weak")
    if bad is not None:
        raise NotWeakError(f"automaton is not weak: SCC {sorted(bad)} mixes final and non-final")
    nfa = a.to_nfa()
    fut = future_masks(nfa)
    rule = tuple((q, fut[q]) for q in sorted(nfa.final))
    base = dict(alphabet=nfa.alphabet, n=nfa.n, transitions=nfa.transitions,
                initial=nfa.initial, names=nfa.names)
    if nfa.n > LAZY_LIMIT:
        raise ValueError(f"Staiger-Wagner tables are limited to {LAZY_LIMIT} states")
    if nfa.n > EXTENSIONAL_LIMIT:
        return StaigerWagnerAutomaton(rule=rule, **base)
    all_masks = np.arange(1 << nfa.n, dtype=np.int64)
    ok = np.zeros(len(all_masks), dtype=bool)
    for q, f in rule:
        ok |= ((all_masks >> q) & 1).astype(bool) & ((all_masks & f) == 0)
    return StaigerWagnerAutomaton(masks=frozenset(int(m) for m in np.nonzero(ok)[0]), **base)


def sw_accepts(b: StaigerWagnerAutomaton, word: str) -> bool:
    """Some run on ``word`` has its visited set in the table."""
    _check_word(b.alphabet, word)
    nfa = b.nfa
    runs = {(1 << q, q) for q in b.initial}
    for x in word:
        runs = {(mask | 1 << r, r) for mask, q in runs for r in nfa.successors(q, x)}
        if not runs:
            return False
    return any(b.in_table(mask) for mask, _ in runs)


def sw_to_nfa(b: StaigerWagnerAutomaton) -> Nfa:
    """Ordinary NFA on pairs (visited set, current state), reachable part only."""
    nfa = b.nfa
    start = [(1 << q, q) for q in sorted(b.initial)]
    ids = {s: i for i, s in enumerate(start)}
    order = list(start)
    trans = set()
    queue = deque(start)
    while queue:
        mask, q = queue.popleft()
        src = ids[(mask, q)]
        for x in nfa.alphabet:
            for r in sorted(nfa.successors(q, x)):
                nxt = (mask | 1 << r, r)
                if nxt not in ids:
                    ids[nxt] = len(order)
                    order.append(nxt)
                    queue.append(nxt)
                trans.add((src, x, ids[nxt]))
    final = frozenset(i for i, (mask, _) in enumerate(order) if b.in_table(mask))
    names = tuple(
        "{" + ",".join(b.name(p) for p in _bits(mask)) + "}:" + b.name(q) for mask, q in order
    )
    return Nfa(nfa.alphabet, len(order), frozenset(trans), frozenset(range(len(start))), final, names)


def nfa_to_weak(a: Automaton) -> Nfa:
    """Weak NFA for the same language with a single fresh final state.

    When there are no final states the automaton is returned with no fresh
    state at all, since nothing could ever reach it.
    """
    nfa = a.to_nfa()
    if not nfa.final:
        return nfa
    f = nfa.n
    trans = set(nfa.transitions)
    trans |= {(p, x, f) for p, x, q in nfa.transitions if q in nfa.final}
    initial = set(nfa.initial)
    if nfa.initial & nfa.final:
        initial.add(f)
    names = None
    if nfa.names is not None:
        taken = set(nfa.names)
        fresh = next(c for c in ("f", *(f"f{i}" for i in range(1, nfa.n + 2))) if c not in taken)
        names = nfa.names + (fresh,)
    return Nfa(nfa.alphabet, nfa.n + 1, frozenset(trans), frozenset(initial), frozenset({f}), names)


@dataclass(frozen=True)
class FlipUnion:
    alphabet: tuple[str, ...]
    parts: tuple[Dfa, ...]

    def __post_init__(self):
        for p in self.parts:
            if tuple(p.alphabet) != tuple(self.alphabet):
                raise AlphabetError("flip union parts need the shared alphabet")
            if not check_shape(p, "flip"):
                raise ValueError("every part of a flip union must be a flip automaton")

    def accepts(self, word: str) -> bool:
        return any(p.accepts(word) for p in self.parts)

    def union(self) -> Nfa:
        return union_all(self.alphabet, self.parts)


def weak_to_flip_union(d: Automaton) -> FlipUnion:
    """One flip automaton per final SCC ``C``, on the states that can reach ``C``."""
    if not is_deterministic(d):
        raise ValueError("weak_to_flip_union needs a deterministic automaton")
    d = as_dfa(accessible(as_dfa(d)))
    bad = shape_violation(d, "weak")
    if bad is not None:
        raise NotWeakError(f"automaton is not weak: SCC {sorted(bad)} mixes final and non-final")
    graph = d.graph
    comps = tarjan(d.n, graph.__getitem__)
    comp_of = component_map(d.n, comps)
    reach = condensation_reach(comps, comp_of, graph.__getitem__)
    final_comps = sorted((c for c in range(len(comps)) if comps[c][0] in d.final),
                         key=lambda c: comps[c][0])
    parts = []
    for c in final_comps:
        keep = [q for q in d.states if reach[comp_of[q]] >> c & 1]
        ids = {q: i for i, q in enumerate(keep)}
        rows = tuple(tuple(ids.get(t) if t is not None else None for t in d.delta[q]) for q in keep)
        names = tuple(d.names[q] for q in keep) if d.names is not None else None
        final = frozenset(ids[q] for q in comps[c])
        parts.append(Dfa(d.alphabet, rows, ids[d.start], final, names))
    return FlipUnion(d.alphabet, tuple(parts))


class BcPair(NamedTuple):
    """``upper`` and ``strict`` right ideals; the language contributes ``upper - strict``."""

    upper: Dfa
    strict: Dfa


def bc_decomposition(d: Automaton) -> list[BcPair]:
    """Write a Boolean combination of right ideals as a union of ideal differences.

    For each R-class ``R`` inside the accepting set of the syntactic monoid,
    ``upper`` recognizes the words mapped R-below ``R`` and ``strict`` those
    strictly below.  Pairs come in the order of the classes' smallest
    element, which is shortlex order of their first representative.
    """
    m, accepting, minimal = syntactic_monoid(d)
    green = green_classes(m)
    if not is_union_of_classes(m, accepting, "R", green):
        raise ValueError("language is not a Boolean combination of right ideals")
    classes = sorted({green.r_class[x] for x in accepting})
    pairs = []
    for c in classes:
        below = {x for x in m.elements if green.r_order[c] >> green.r_class[x] & 1}
        strict = below - set(green.members("R", c))
        pairs.append(BcPair(minimize(preimage_dfa(m, below)), minimize(preimage_dfa(m, strict))))
    rebuilt = union_all(m.alphabet, [combine(p.upper, p.strict, "difference") for p in pairs])
    if not equivalent(rebuilt, minimal):
        raise AssertionError("decomposition does not rebuild the language")
    return pairs


# -- JSON ------------------------------------------------------------------


def sw_to_json(b: StaigerWagnerAutomaton) -> dict:
    obj = automaton_to_json(b.nfa)
    obj.pop("final")
    obj["table"] = [[b.name(q) for q in sorted(t)] for t in b.table]
    return obj


def sw_from_json(obj: dict) -> StaigerWagnerAutomaton:
    base = automaton_from_json({**obj, "final": []}).to_nfa()
    ids = {base.name(q): q for q in base.states}
    try:
        masks = frozenset(sum(1 << ids[str(s)] for s in t) for t in obj["table"])
    except KeyError as exc:
        raise ValueError(f"bad Staiger-Wagner table: {exc}") from None
    return StaigerWagnerAutomaton(base.alphabet, base.n, base.transitions, base.initial,
                                  masks=masks, names=base.names)


def flip_union_to_json(u: FlipUnion) -> list[dict]:
    return [automaton_to_json(p) for p in u.parts]


def flip_union_from_json(objs: Sequence[dict], alphabet: Iterable[str] | None = None) -> FlipUnion:
    parts = tuple(as_dfa(automaton_from_json(o)) for o in objs)
    if alphabet is None:
        if not parts:
            raise ValueError("an empty flip union needs an explicit alphabet")
        alphabet = parts[0].alphabet
    return FlipUnion(make_alphabet(alphabet), parts)
