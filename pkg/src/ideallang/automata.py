"""One-way finite automata: representations, canonical forms and Boolean operations.

States are the integers ``0..n-1``; optional ``names`` only matter for JSON
output.  Every value is immutable, and every function returns a new automaton.

Two representations are used:

* :class:`Nfa` -- transition relation, any number of initial states;
* :class:`Dfa` -- a partial transition function stored as ``delta[q][i]``
  for the ``i``-th letter of the alphabet (``None`` when undefined).

The empty automaton (no states at all) is legal in both forms and recognizes
the empty language.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from ._graph import tarjan

# Reserved for the two-way tape; never part of an input alphabet.
LEFT_MARKER = ">"
RIGHT_MARKER = "<"
_RESERVED = frozenset({LEFT_MARKER, RIGHT_MARKER, "%", "(", ")", "|", "*", "+", "?"})


class AlphabetError(ValueError):
    pass


def make_alphabet(letters: Iterable[str]) -> tuple[str, ...]:
    """Validate an alphabet and return it as an ordered tuple."""
    out = tuple(letters)
    if not out:
        raise AlphabetError("alphabet must not be empty")
    if len(set(out)) != len(out):
        raise AlphabetError(f"duplicate letters in alphabet {out!r}")
    for a in out:
        if not isinstance(a, str) or len(a) != 1:
            raise AlphabetError(f"letters must be single characters, got {a!r}")
        if a in _RESERVED or a.isspace():
            raise AlphabetError(f"letter {a!r} is reserved")
    return out


def alph(word: str) -> frozenset[str]:
    """Set of letters occurring in ``word``."""
    return frozenset(word)


def letter_at(word: str, i: int) -> str:
    """The ``i``-th letter of ``word``, counting from 1."""
    if not 1 <= i <= len(word):
        raise IndexError(f"position {i} outside 1..{len(word)}")
    return word[i - 1]


def _check_word(alphabet: Sequence[str], word: str) -> None:
    bad = set(word) - set(alphabet)
    if bad:
        raise AlphabetError(f"letters {sorted(bad)} not in alphabet {''.join(alphabet)!r}")


@dataclass(frozen=True)
class Nfa:
    alphabet: tuple[str, ...]
    n: int
    transitions: frozenset[tuple[int, str, int]]
    initial: frozenset[int]
    final: frozenset[int]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        make_alphabet(self.alphabet)
        letters = set(self.alphabet)
        for p, a, q in self.transitions:
            if not (0 <= p < self.n and 0 <= q < self.n):
                raise ValueError(f"transition {(p, a, q)} leaves the state set")
            if a not in letters:
                raise AlphabetError(f"transition letter {a!r} not in alphabet")
        for q in self.initial | self.final:
            if not 0 <= q < self.n:
                raise ValueError(f"state {q} outside 0..{self.n - 1}")
        if self.names is not None and len(self.names) != self.n:
            raise ValueError("names must list every state")

    @property
    def states(self) -> range:
        return range(self.n)

    @cached_property
    def _succ(self) -> dict[tuple[int, str], frozenset[int]]:
        table: dict[tuple[int, str], set[int]] = {}
        for p, a, q in self.transitions:
            table.setdefault((p, a), set()).add(q)
        return {k: frozenset(v) for k, v in table.items()}

    def successors(self, p: int, a: str) -> frozenset[int]:
        return self._succ.get((p, a), frozenset())

    @cached_property
    def graph(self) -> tuple[tuple[int, ...], ...]:
        """Successor lists ignoring letters."""
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for p, _, q in self.transitions:
            adj[p].add(q)
        return tuple(tuple(sorted(s)) for s in adj)

    def step(self, subset: Iterable[int], a: str) -> frozenset[int]:
        out: set[int] = set()
        for p in subset:
            out |= self.successors(p, a)
        return frozenset(out)

    def accepts(self, word: str) -> bool:
        _check_word(self.alphabet, word)
        current = self.initial
        for a in word:
            current = self.step(current, a)
            if not current:
                return False
        return bool(current & self.final)

    def name(self, q: int) -> str:
        return self.names[q] if self.names is not None else str(q)

    def to_nfa(self) -> Nfa:
        return self


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple[str, ...]
    delta: tuple[tuple[int | None, ...], ...]
    start: int | None
    final: frozenset[int]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        make_alphabet(self.alphabet)
        n = len(self.delta)
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ValueError("every delta row needs one entry per letter")
            for q in row:
                if q is not None and not 0 <= q < n:
                    raise ValueError(f"target {q} outside 0..{n - 1}")
        if n == 0:
            if self.start is not None or self.final:
                raise ValueError("the empty automaton has no start or final states")
        elif self.start is None or not 0 <= self.start < n:
            raise ValueError("a non-empty DFA needs a start state")
        for q in self.final:
            if not 0 <= q < n:
                raise ValueError(f"final state {q} outside 0..{n - 1}")
        if self.names is not None and len(self.names) != n:
            raise ValueError("names must list every state")

    @property
    def n(self) -> int:
        return len(self.delta)

    @property
    def states(self) -> range:
        return range(self.n)

    @property
    def initial(self) -> frozenset[int]:
        return frozenset() if self.start is None else frozenset({self.start})

    @cached_property
    def complete(self) -> bool:
        return self.n > 0 and all(q is not None for row in self.delta for q in row)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    def next(self, q: int, a: str) -> int | None:
        return self.delta[q][self._index[a]]

    def run(self, word: str, q: int | None = None) -> int | None:
        q = self.start if q is None else q
        idx = self._index
        for a in word:
            if q is None:
                return None
            q = self.delta[q][idx[a]]
        return q

    def accepts(self, word: str) -> bool:
        _check_word(self.alphabet, word)
        q = self.run(word)
        return q is not None and q in self.final

    @cached_property
    def transitions(self) -> frozenset[tuple[int, str, int]]:
        return frozenset(
            (p, a, q)
            for p, row in enumerate(self.delta)
            for a, q in zip(self.alphabet, row)
            if q is not None
        )

    @cached_property
    def graph(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted({q for q in row if q is not None})) for row in self.delta)

    def name(self, q: int) -> str:
        return self.names[q] if self.names is not None else str(q)

    def to_nfa(self) -> Nfa:
        return Nfa(self.alphabet, self.n, self.transitions, self.initial, self.final, self.names)


Automaton = Union[Nfa, Dfa]


class Verdict(NamedTuple):
    """Boolean answer with the shortest witness word when it is false."""

    holds: bool
    counterexample: str | None = None

    def __bool__(self) -> bool:
        return self.holds


# -- small constructors ----------------------------------------------------


def empty_dfa(alphabet: Sequence[str]) -> Dfa:
    return Dfa(tuple(alphabet), (), None, frozenset())


def universal_dfa(alphabet: Sequence[str]) -> Dfa:
    return Dfa(tuple(alphabet), ((0,) * len(alphabet),), 0, frozenset({0}))


def nfa_from_transitions(
    alphabet: Sequence[str],
    n: int,
    transitions: Iterable[tuple[int, str, int]],
    initial: Iterable[int],
    final: Iterable[int],
) -> Nfa:
    return Nfa(tuple(alphabet), n, frozenset(transitions), frozenset(initial), frozenset(final))


def dfa_from_map(
    alphabet: Sequence[str],
    n: int,
    delta: dict[tuple[int, str], int],
    start: int,
    final: Iterable[int],
) -> Dfa:
    rows = tuple(tuple(delta.get((q, a)) for a in alphabet) for q in range(n))
    return Dfa(tuple(alphabet), rows, start, frozenset(final))


def is_deterministic(a: Automaton) -> bool:
    if isinstance(a, Dfa):
        return True
    if a.n == 0:
        return True
    if len(a.initial) != 1:
        return False
    return all(len(v) <= 1 for v in a._succ.values())


def as_dfa(a: Automaton) -> Dfa:
    """Reinterpret a deterministic NFA as a :class:`Dfa` without changing states."""
    if isinstance(a, Dfa):
        return a
    if not is_deterministic(a):
        raise ValueError("automaton is not deterministic")
    if a.n == 0:
        return empty_dfa(a.alphabet)
    rows = []
    for q in range(a.n):
        row = []
        for x in a.alphabet:
            succ = a.successors(q, x)
            row.append(next(iter(succ)) if succ else None)
        rows.append(tuple(row))
    (start,) = a.initial
    return Dfa(a.alphabet, tuple(rows), start, a.final, a.names)


def _same_alphabet(x: Automaton, y: Automaton) -> None:
    if tuple(x.alphabet) != tuple(y.alphabet):
        raise AlphabetError(f"alphabet mismatch: {x.alphabet} vs {y.alphabet}")


# -- canonical forms -------------------------------------------------------


def determinize(a: Automaton) -> Dfa:
    """Subset construction restricted to accessible subsets; the result is complete."""
    if isinstance(a, Dfa):
        return complete(accessible(a))
    nfa = a
    start = frozenset(nfa.initial)
    ids = {start: 0}
    order = [start]
    rows: list[list[int]] = []
    i = 0
    while i < len(order):
        cur = order[i]
        row = []
        for x in nfa.alphabet:
            nxt = nfa.step(cur, x)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(row)
        i += 1
    final = frozenset(i for i, s in enumerate(order) if s & nfa.final)
    return Dfa(nfa.alphabet, tuple(tuple(r) for r in rows), 0, final)


def canonical(d: Dfa) -> Dfa:
    """Renumber states by BFS from the start state over letters in alphabet order.

    Inaccessible states are dropped.
    """
    if d.start is None:
        return empty_dfa(d.alphabet)
    order = [d.start]
    ids = {d.start: 0}
    i = 0
    while i < len(order):
        for q in d.delta[order[i]]:
            if q is not None and q not in ids:
                ids[q] = len(order)
                order.append(q)
        i += 1
    rows = tuple(
        tuple(None if q is None else ids[q] for q in d.delta[p]) for p in order
    )
    final = frozenset(ids[q] for q in d.final if q in ids)
    return Dfa(d.alphabet, rows, 0, final)


def minimize(d: Dfa) -> Dfa:
    """Moore partition refinement on the completed, accessible part of ``d``."""
    d = complete(accessible(d))
    n = d.n
    block = [1 if q in d.final else 0 for q in range(n)]
    while True:
        signatures: dict[tuple, int] = {}
        new_block = []
        for q in range(n):
            sig = (block[q],) + tuple(block[t] for t in d.delta[q])
            new_block.append(signatures.setdefault(sig, len(signatures)))
        if len(signatures) == len(set(block)):
            block = new_block
            break
        block = new_block
    count = max(block) + 1
    rows: list[tuple[int, ...] | None] = [None] * count
    for q in range(n):
        if rows[block[q]] is None:
            rows[block[q]] = tuple(block[t] for t in d.delta[q])
    final = frozenset(block[q] for q in d.final)
    quotient = Dfa(d.alphabet, tuple(rows), block[d.start], final)  # type: ignore[arg-type]
    return canonical(quotient)


def to_minimal_dfa(a: Automaton) -> Dfa:
    """Complete minimal DFA with canonical BFS state numbering."""
    return minimize(determinize(a))


def complete(d: Dfa) -> Dfa:
    """Add one non-final sink if some transition is missing."""
    if d.complete:
        return d
    n = d.n
    sink = n
    rows = tuple(tuple(sink if q is None else q for q in row) for row in d.delta)
    rows += ((sink,) * len(d.alphabet),)
    start = sink if d.start is None else d.start
    names = None
    if d.names is not None:
        names = d.names + (_fresh_name(d.names, "sink"),)
    return Dfa(d.alphabet, rows, start, d.final, names)


def _fresh_name(names: Sequence[str], base: str) -> str:
    taken = set(names)
    if base not in taken:
        return base
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in taken:
            return cand
    raise AssertionError  # pragma: no cover


def _restrict(a: Automaton, keep: Iterable[int]) -> Automaton:
    keep = sorted(set(keep))
    ids = {q: i for i, q in enumerate(keep)}
    names = tuple(a.names[q] for q in keep) if a.names is not None else None
    if isinstance(a, Dfa):
        if a.start is None or a.start not in ids:
            return empty_dfa(a.alphabet)
        rows = tuple(
            tuple(ids.get(q) if q is not None else None for q in a.delta[p]) for p in keep
        )
        return Dfa(a.alphabet, rows, ids[a.start], frozenset(ids[q] for q in a.final if q in ids), names)
    trans = frozenset((ids[p], x, ids[q]) for p, x, q in a.transitions if p in ids and q in ids)
    return Nfa(
        a.alphabet,
        len(keep),
        trans,
        frozenset(ids[q] for q in a.initial if q in ids),
        frozenset(ids[q] for q in a.final if q in ids),
        names,
    )


def _reachable(graph: Sequence[Sequence[int]], sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    todo = list(seen)
    while todo:
        p = todo.pop()
        for q in graph[p]:
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def _coreachable(a: Automaton) -> set[int]:
    back: list[list[int]] = [[] for _ in range(a.n)]
    for p, _, q in a.transitions:
        back[q].append(p)
    return _reachable(back, a.final)


def accessible(a: Automaton) -> Automaton:
    """Drop states that no initial state reaches."""
    keep = _reachable(a.graph, a.initial)
    if len(keep) == a.n:
        return a
    return _restrict(a, keep)


def trim(a: Automaton) -> Automaton:
    """Keep the states that are both accessible and co-accessible."""
    keep = _reachable(a.graph, a.initial) & _coreachable(a)
    if len(keep) == a.n:
        return a
    return _restrict(a, keep)


def reverse(a: Automaton) -> Nfa:
    """Automaton for the mirror language; initial and final states swap roles."""
    nfa = a.to_nfa()
    return Nfa(
        nfa.alphabet,
        nfa.n,
        frozenset((q, x, p) for p, x, q in nfa.transitions),
        nfa.final,
        nfa.initial,
        nfa.names,
    )


# -- Boolean operations ----------------------------------------------------

_OPS = {
    "union": lambda x, y: x or y,
    "intersection": lambda x, y: x and y,
    "difference": lambda x, y: x and not y,
    "symmetric_difference": lambda x, y: x != y,
}


def combine(x: Automaton, y: Automaton, op: str) -> Dfa:
    """Product construction; ``op`` is union, intersection or difference."""
    _same_alphabet(x, y)
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    dx, dy = determinize(x), determinize(y)
    start = (dx.start, dy.start)
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        for k in range(len(dx.alphabet)):
            nxt = (dx.delta[p][k], dy.delta[q][k])
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(tuple(row))
        i += 1
    final = frozenset(
        i for i, (p, q) in enumerate(order) if fn(p in dx.final, q in dy.final)
    )
    return Dfa(dx.alphabet, tuple(rows), 0, final)


def complement(x: Dfa) -> Dfa:
    """Swap final and non-final states of a complete DFA."""
    if not isinstance(x, Dfa) or not x.complete:
        raise ValueError("complement needs a complete DFA")
    return Dfa(x.alphabet, x.delta, x.start, frozenset(range(x.n)) - x.final, x.names)


def union_all(alphabet: Sequence[str], parts: Iterable[Automaton]) -> Nfa:
    """Disjoint union of automata as one NFA."""
    trans: set[tuple[int, str, int]] = set()
    initial: set[int] = set()
    final: set[int] = set()
    offset = 0
    for part in parts:
        if tuple(part.alphabet) != tuple(alphabet):
            raise AlphabetError(f"alphabet mismatch: {part.alphabet} vs {tuple(alphabet)}")
        nfa = part.to_nfa()
        trans |= {(p + offset, x, q + offset) for p, x, q in nfa.transitions}
        initial |= {q + offset for q in nfa.initial}
        final |= {q + offset for q in nfa.final}
        offset += nfa.n
    return Nfa(tuple(alphabet), offset, frozenset(trans), frozenset(initial), frozenset(final))


# -- decisions -------------------------------------------------------------


def compare(x: Automaton, y: Automaton, mode: str = "equivalent") -> Verdict:
    """Decide ``L(x) == L(y)`` or ``L(x) <= L(y)``.

    The counterexample, when there is one, is the shortlex-least word in the
    symmetric difference (equivalent) or in ``L(x) - L(y)`` (included).
    """
    _same_alphabet(x, y)
    if mode not in ("equivalent", "included"):
        raise ValueError(f"unknown comparison mode {mode!r}")
    nx, ny = x.to_nfa(), y.to_nfa()
    start = (nx.initial, ny.initial)
    seen = {start}
    queue = deque([(start, "")])
    while queue:
        (sx, sy), word = queue.popleft()
        ix = bool(sx & nx.final)
        iy = bool(sy & ny.final)
        if (ix and not iy) or (mode == "equivalent" and iy and not ix):
            return Verdict(False, word)
        for a in nx.alphabet:
            nxt = (nx.step(sx, a), ny.step(sy, a))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + a))
    return Verdict(True, None)


def equivalent(x: Automaton, y: Automaton) -> bool:
    return compare(x, y, "equivalent").holds


def is_empty(a: Automaton) -> bool:
    return not (_reachable(a.graph, a.initial) & set(a.final))


def all_words(alphabet: Sequence[str], max_len: int) -> Iterator[str]:
    """All words of length at most ``max_len`` in shortlex order."""
    for k in range(max_len + 1):
        for t in itertools.product(alphabet, repeat=k):
            yield "".join(t)


def enumerate_words(a: Automaton, max_len: int) -> list[str]:
    """Accepted words of length at most ``max_len`` in shortlex order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    nfa = a.to_nfa()
    out = []
    level = [("", nfa.initial)] if nfa.initial else []
    for k in range(max_len + 1):
        out.extend(w for w, s in level if s & nfa.final)
        if k == max_len:
            break
        nxt = []
        for w, s in level:
            for x in nfa.alphabet:
                t = nfa.step(s, x)
                if t:
                    nxt.append((w + x, t))
        level = nxt
    return out


def membership_table(a: Automaton, max_len: int) -> dict[str, bool]:
    """Membership of every word up to ``max_len``, by incremental subset tracking."""
    nfa = a.to_nfa()
    table = {"": bool(nfa.initial & nfa.final)}
    level = [("", nfa.initial)]
    for _ in range(max_len):
        nxt = []
        for w, s in level:
            for x in nfa.alphabet:
                t = nfa.step(s, x) if s else s
                table[w + x] = bool(t & nfa.final)
                nxt.append((w + x, t))
        level = nxt
    return table


def strongly_connected_components(a: Automaton) -> list[frozenset[int]]:
    """SCCs of the transition graph; a component precedes every component it reaches."""
    graph = a.graph
    return [frozenset(c) for c in tarjan(a.n, graph.__getitem__)]


# -- JSON ------------------------------------------------------------------


def to_json(a: Automaton) -> dict:
    nfa = a.to_nfa()
    names = [nfa.name(q) for q in range(nfa.n)]
    return {
        "alphabet": list(nfa.alphabet),
        "states": names,
        "initial": [names[q] for q in sorted(nfa.initial)],
        "final": [names[q] for q in sorted(nfa.final)],
        "transitions": [[names[p], x, names[q]] for p, x, q in sorted(nfa.transitions)],
    }


def from_json(obj: dict) -> Automaton:
    """Parse the automaton JSON format; deterministic inputs come back as a :class:`Dfa`."""
    try:
        alphabet = make_alphabet(obj["alphabet"])
        names = [str(s) for s in obj["states"]]
        if len(set(names)) != len(names):
            raise ValueError("duplicate state names")
        ids = {s: i for i, s in enumerate(names)}

        def sid(s):
            try:
                return ids[str(s)]
            except KeyError:
                raise ValueError(f"unknown state {s!r}") from None

        trans = frozenset((sid(p), x, sid(q)) for p, x, q in obj.get("transitions", []))
        nfa = Nfa(
            alphabet,
            len(names),
            trans,
            frozenset(sid(s) for s in obj.get("initial", [])),
            frozenset(sid(s) for s in obj.get("final", [])),
            tuple(names),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed automaton JSON: {exc}") from exc
    if nfa.n > 0 and is_deterministic(nfa):
        return as_dfa(nfa)
    return nfa
