"""Deterministic two-way automata with end markers, rankers and monomials.

The tape for an input ``u`` is ``>u<``: position 0 holds the left marker,
positions ``1..|u|`` the letters and ``|u|+1`` the right marker.  A run
starts in the initial state at position 1.  Every transition first reads
the symbol under the head and then moves the head one step in the direction
of the *target* state: right for states in ``right_states``, left for
states in ``left_states``.  The run is over once the head reaches
``|u|+2``, which can only happen by leaving the right marker into a
right-moving state.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from ._graph import tarjan
from .automata import (
    LEFT_MARKER,
    RIGHT_MARKER,
    AlphabetError,
    Dfa,
    Nfa,
    _check_word,
    combine,
    compare,
    empty_dfa,
    make_alphabet,
    minimize,
    reverse,
    to_minimal_dfa,
    union_all,
)

TWO_WAY_SHAPES = ("partially_ordered", "one_pass", "flip", "fully_accepting", "weak")


class Diagnostic(NamedTuple):
    kind: str
    message: str
    transition: tuple[str, str, str] | None = None


class TwoWayError(ValueError):
    """Raised when an operation's structural precondition fails."""

    def __init__(self, message: str, diagnostics: Sequence[Diagnostic] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


@dataclass(frozen=True)
class TwoWayAutomaton:
    """States are strings; ``initial`` is ``None`` only for the empty automaton."""

    alphabet: tuple[str, ...]
    right_states: tuple[str, ...]
    left_states: tuple[str, ...]
    transitions: frozenset[tuple[str, str, str]]
    initial: str | None
    final: frozenset[str]
    _delta: dict = field(init=False, repr=False, compare=False)
    _right: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        make_alphabet(self.alphabet)
        delta: dict[tuple[str, str], str] = {}
        for z, a, t in sorted(self.transitions):
            delta.setdefault((z, a), t)
        object.__setattr__(self, "_delta", delta)
        object.__setattr__(self, "_right", frozenset(self.right_states))

    @property
    def states(self) -> tuple[str, ...]:
        return self.right_states + self.left_states

    @property
    def is_empty_automaton(self) -> bool:
        return not self.states and not self.transitions and self.initial is None

    def moves_right(self, z: str) -> bool:
        return z in self._right

    def next(self, z: str, a: str) -> str | None:
        return self._delta.get((z, a))

    def state_graph(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {z: set() for z in self.states}
        for z, _, t in self.transitions:
            adj.setdefault(z, set()).add(t)
        return adj


def empty_two_way(alphabet: Iterable[str]) -> TwoWayAutomaton:
    return TwoWayAutomaton(make_alphabet(alphabet), (), (), frozenset(), None, frozenset())


def from_dfa(d: Dfa) -> TwoWayAutomaton:
    """Embed a one-way DFA (no left-moving states).

    The right marker gets a self-loop on every state so the automaton is
    one-pass and accepts exactly when the DFA does.
    """
    if d.n == 0:
        return empty_two_way(d.alphabet)
    names = [f"q{q}" for q in d.states]
    trans = {(names[p], a, names[q]) for p, a, q in d.transitions}
    trans |= {(z, RIGHT_MARKER, z) for z in names}
    return TwoWayAutomaton(d.alphabet, tuple(names), (), frozenset(trans), names[d.start],
                           frozenset(names[q] for q in d.final))


# -- validation ------------------------------------------------------------


def validate(t: TwoWayAutomaton) -> list[Diagnostic]:
    """Every structural problem found; an empty list means the automaton is fine."""
    out: list[Diagnostic] = []
    xs, ys = set(t.right_states), set(t.left_states)
    zs = xs | ys
    for name in sorted(xs & ys):
        out.append(Diagnostic("overlap", f"state {name!r} is both right- and left-moving"))
    for group in (t.right_states, t.left_states):
        if len(set(group)) != len(group):
            out.append(Diagnostic("duplicate", "duplicate state names"))
    if t.initial is None:
        if zs or t.transitions or t.final:
            out.append(Diagnostic("initial", "a non-empty automaton needs an initial state"))
    elif t.initial not in xs:
        out.append(Diagnostic("initial", f"initial state {t.initial!r} is not right-moving"))
    for z in sorted(t.final - zs):
        out.append(Diagnostic("final", f"final state {z!r} is not a state"))
    letters = set(t.alphabet)
    seen: dict[tuple[str, str], str] = {}
    for tr in sorted(t.transitions):
        z, a, target = tr
        if z not in zs or target not in zs:
            out.append(Diagnostic("state", "transition uses an unknown state", tr))
            continue
        if a == LEFT_MARKER:
            if z not in ys:
                out.append(Diagnostic("signature", "only left-moving states read the left marker", tr))
            if target not in xs:
                out.append(Diagnostic("signature", "the left marker must be left to a right-moving state", tr))
        elif a == RIGHT_MARKER:
            if z not in xs:
                out.append(Diagnostic("signature", "only right-moving states read the right marker", tr))
        elif a not in letters:
            out.append(Diagnostic("symbol", f"symbol {a!r} is neither a letter nor a marker", tr))
        key = (z, a)
        if key in seen and seen[key] != target:
            out.append(Diagnostic("determinism", f"two successors for {key}", tr))
        seen.setdefault(key, target)
    return out


def _require_valid(t: TwoWayAutomaton) -> None:
    diags = validate(t)
    if diags:
        raise TwoWayError("invalid two-way automaton: " + diags[0].message, diags)


# -- simulation ------------------------------------------------------------


class RunResult(NamedTuple):
    """``outcome`` is accept, reject, loop or stuck.

    For accept and reject, ``state`` is the state at position ``|u|+2``;
    for stuck it is the state that has no move; the empty automaton gives
    reject with ``state`` ``None``.
    """

    outcome: str
    state: str | None
    trace: tuple[tuple[str, int], ...]

    @property
    def accepted(self) -> bool:
        return self.outcome == "accept"


def tape_symbol(word: str, i: int) -> str:
    if i == 0:
        return LEFT_MARKER
    if i == len(word) + 1:
        return RIGHT_MARKER
    return word[i - 1]


def simulate(t: TwoWayAutomaton, word: str) -> RunResult:
    _check_word(t.alphabet, word)
    if t.initial is None:
        return RunResult("reject", None, ())
    end = len(word) + 2
    z, i = t.initial, 1
    trace = [(z, i)]
    seen = {(z, i)}
    while True:
        target = t.next(z, tape_symbol(word, i))
        if target is None:
            return RunResult("stuck", z, tuple(trace))
        z, i = target, i + 1 if t.moves_right(target) else i - 1
        trace.append((z, i))
        if i == end:
            return RunResult("accept" if z in t.final else "reject", z, tuple(trace))
        if (z, i) in seen:
            return RunResult("loop", z, tuple(trace))
        seen.add((z, i))


def accepts(t: TwoWayAutomaton, word: str) -> bool:
    return simulate(t, word).accepted


# -- shapes ----------------------------------------------------------------


def is_complete(t: TwoWayAutomaton) -> bool:
    for z in t.right_states:
        if any(t.next(z, a) is None for a in (*t.alphabet, RIGHT_MARKER)):
            return False
    for z in t.left_states:
        if any(t.next(z, a) is None for a in (*t.alphabet, LEFT_MARKER)):
            return False
    return True


def _sccs(t: TwoWayAutomaton) -> list[list[str]]:
    names = list(t.states)
    ids = {z: i for i, z in enumerate(names)}
    adj = t.state_graph()
    succ = [sorted(ids[w] for w in adj[z]) for z in names]
    return [[names[i] for i in c] for c in tarjan(len(names), succ.__getitem__)]


def shape(t: TwoWayAutomaton, which: str) -> bool:
    if which == "partially_ordered":
        return all(len(c) == 1 for c in _sccs(t))
    if which == "one_pass":
        return all(z == target for z, a, target in t.transitions if a == RIGHT_MARKER)
    if which == "flip":
        return all(target in t.final for z, _, target in t.transitions if z in t.final)
    if which == "fully_accepting":
        return set(t.final) == set(t.states)
    if which == "weak":
        return all(set(c) <= t.final or not set(c) & t.final for c in _sccs(t))
    raise ValueError(f"unknown shape {which!r}; expected one of {TWO_WAY_SHAPES}")


def _require_shapes(t: TwoWayAutomaton, *shapes: str, complete: bool = False) -> None:
    _require_valid(t)
    for s in shapes:
        if not shape(t, s):
            raise TwoWayError(f"automaton is not {s.replace('_', ' ')}")
    if complete and not is_complete(t):
        raise TwoWayError("automaton is not complete")


def _fresh(t: TwoWayAutomaton, base: str) -> str:
    taken = set(t.states)
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


def complete_two_way(t: TwoWayAutomaton, sink: str = "sink") -> TwoWayAutomaton:
    """Send every missing move to a fresh right-moving, non-final sink.

    The sink loops on all letters and on the right marker, so a completed
    run can never be trapped bouncing at the left end.
    """
    _require_valid(t)
    if t.initial is None:
        s = sink
        loops = {(s, a, s) for a in (*t.alphabet, RIGHT_MARKER)}
        return TwoWayAutomaton(t.alphabet, (s,), (), frozenset(loops), s, frozenset())
    if is_complete(t):
        return t
    s = _fresh(t, sink)
    trans = set(t.transitions)
    for z in t.right_states:
        trans |= {(z, a, s) for a in (*t.alphabet, RIGHT_MARKER) if t.next(z, a) is None}
    for z in t.left_states:
        trans |= {(z, a, s) for a in (*t.alphabet, LEFT_MARKER) if t.next(z, a) is None}
    trans |= {(s, a, s) for a in (*t.alphabet, RIGHT_MARKER)}
    return TwoWayAutomaton(t.alphabet, t.right_states + (s,), t.left_states,
                           frozenset(trans), t.initial, t.final)


def complement_one_pass(t: TwoWayAutomaton) -> TwoWayAutomaton:
    """Automaton for the complement of a one-pass po2dfa.

    A right-moving state without a right-marker move would reject by
    getting stuck; it receives a non-final self-loop first, so that after
    completion and swapping finality on the right-moving states every run
    ends at the right marker with the opposite verdict.
    """
    _require_shapes(t, "one_pass", "partially_ordered")
    if t.initial is None:
        return _universal(t.alphabet)
    missing = [z for z in t.right_states if t.next(z, RIGHT_MARKER) is None]
    trans = set(t.transitions) | {(z, RIGHT_MARKER, z) for z in missing}
    final = frozenset(z for z in t.right_states if z in t.final and z not in missing)
    norm = TwoWayAutomaton(t.alphabet, t.right_states, t.left_states, frozenset(trans),
                           t.initial, final)
    full = complete_two_way(norm)
    flipped = frozenset(full.right_states) - full.final
    return TwoWayAutomaton(full.alphabet, full.right_states, full.left_states,
                           full.transitions, full.initial, flipped)


def _universal(alphabet: Sequence[str]) -> TwoWayAutomaton:
    s = "all"
    loops = {(s, a, s) for a in (*alphabet, RIGHT_MARKER)}
    return TwoWayAutomaton(tuple(alphabet), (s,), (), frozenset(loops), s, frozenset({s}))


def convert_flip_fully(t: TwoWayAutomaton, direction: str) -> TwoWayAutomaton:
    """Pass between flip and fully accepting one-pass po2dfa for the complement.

    ``flip_to_fully`` keeps the non-final states and makes them all final.
    ``fully_to_flip`` sends every missing move to a fresh final sink, which
    becomes the only final state; it needs a right-marker self-loop on every
    right-moving state, since adding a non-loop right-marker move would break
    the one-pass shape.
    """
    if direction == "flip_to_fully":
        _require_shapes(t, "one_pass", "partially_ordered", "flip", complete=True)
        if t.initial is None or t.initial in t.final:
            return empty_two_way(t.alphabet)
        keep = set(t.states) - t.final
        trans = frozenset(tr for tr in t.transitions if tr[0] in keep and tr[2] in keep)
        xs = tuple(z for z in t.right_states if z in keep)
        ys = tuple(z for z in t.left_states if z in keep)
        return TwoWayAutomaton(t.alphabet, xs, ys, trans, t.initial, frozenset(keep))
    if direction == "fully_to_flip":
        _require_shapes(t, "one_pass", "partially_ordered", "fully_accepting")
        if t.initial is None:
            return _universal(t.alphabet)
        lacking = [z for z in t.right_states if t.next(z, RIGHT_MARKER) is None]
        if lacking:
            raise TwoWayError(
                f"right-moving states {lacking} have no right-marker self-loop")
        s = _fresh(t, "x_f")
        full = complete_two_way(t, sink=s)
        if s not in full.states:  # already complete: L = A*, add the sink anyway
            loops = {(s, a, s) for a in (*t.alphabet, RIGHT_MARKER)}
            full = TwoWayAutomaton(t.alphabet, t.right_states + (s,), t.left_states,
                                   t.transitions | loops, t.initial, t.final)
        return TwoWayAutomaton(full.alphabet, full.right_states, full.left_states,
                               full.transitions, full.initial, frozenset({s}))
    raise ValueError(f"unknown direction {direction!r}")


# -- conversion to a one-way DFA -------------------------------------------

DIVERGE = None  # no rightward exit: the run loops or gets stuck inside the prefix


def _exit(t: TwoWayAutomaton, z: str, symbol: str, table: dict) -> str | None:
    """Right-moving state in which a run at ``z`` on the last prefix position leaves it.

    ``table`` gives, for each left-moving state entering the shorter prefix,
    the state it comes back with.
    """
    seen = set()
    while z not in seen:
        seen.add(z)
        target = t.next(z, symbol)
        if target is None:
            return DIVERGE
        if t.moves_right(target):
            return target
        z = table[target]
        if z is DIVERGE:
            return DIVERGE
    return DIVERGE


def to_one_way_dfa(t: TwoWayAutomaton) -> Dfa:
    """Equivalent complete one-way DFA via boundary behaviour tables.

    A DFA state records, for the prefix read so far, the state in which the
    run first crosses the prefix boundary rightwards and, for every
    left-moving state entering the prefix from the right, the state it
    leaves with; ``None`` marks runs that never come back out.
    """
    _require_valid(t)
    if t.initial is None:
        return empty_dfa(t.alphabet)
    ys = t.left_states
    start_table = tuple(
        (t.next(y, LEFT_MARKER) if t.next(y, LEFT_MARKER) is not None else DIVERGE) for y in ys
    )
    start = (t.initial, start_table)
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        first, table = order[i]
        tab = dict(zip(ys, table))
        row = []
        for a in t.alphabet:
            if first is DIVERGE:
                nxt = (DIVERGE, ())
            else:
                new_first = _exit(t, first, a, tab)
                new_table = tuple(_exit(t, y, a, tab) for y in ys)
                nxt = (new_first, new_table) if new_first is not DIVERGE else (DIVERGE, ())
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(tuple(row))
        i += 1
    final = set()
    for k, (first, table) in enumerate(order):
        if first is DIVERGE:
            continue
        out = _exit(t, first, RIGHT_MARKER, dict(zip(ys, table)))
        if out is not DIVERGE and out in t.final:
            final.add(k)
    return Dfa(t.alphabet, tuple(rows), 0, frozenset(final))


# -- rankers ---------------------------------------------------------------


class Ranker(tuple):
    """A non-empty tuple of ``(modality, letter)`` with modality ``X`` or ``Y``."""

    def __new__(cls, steps: Iterable[tuple[str, str]]):
        steps = tuple((str(m), str(a)) for m, a in steps)
        if not steps:
            raise ValueError("a ranker needs at least one modality")
        for m, a in steps:
            if m not in ("X", "Y"):
                raise ValueError(f"unknown modality {m!r}")
            if len(a) != 1:
                raise ValueError(f"ranker letters are single characters, got {a!r}")
        return super().__new__(cls, steps)

    @property
    def kind(self) -> str:
        return self[0][0]

    def mirror(self) -> Ranker:
        return Ranker(("Y" if m == "X" else "X", a) for m, a in self)

    def __str__(self) -> str:
        return " ".join(f"{m}_{a}" for m, a in self)


_RANKER_TOKEN = re.compile(r"\s*([XY])_?([^\s_])")


def parse_ranker(text: str) -> Ranker:
    """Read ``"X_a Y_b X_c"``; underscores and spaces are optional."""
    steps, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _RANKER_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad ranker syntax at position {pos}: {text!r}")
        steps.append((m.group(1), m.group(2)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return Ranker(steps)


def eval_ranker(r: Ranker, word: str) -> int | None:
    """1-based position reached by ``r`` on ``word``, or ``None`` when undefined."""
    i = 0 if r.kind == "X" else len(word) + 1
    for m, a in r:
        if m == "X":
            i = next((j for j in range(i + 1, len(word) + 1) if word[j - 1] == a), None)
        else:
            i = next((j for j in range(i - 1, 0, -1) if word[j - 1] == a), None)
        if i is None:
            return None
    return i


def compile_ranker(r: Ranker, alphabet: Iterable[str]) -> TwoWayAutomaton:
    """One-pass po2dfa accepting exactly the words on which ``r`` is defined.

    State ``q_i`` scans in the direction of the ``i``-th modality, skipping
    other letters, and moves on at its target letter; the last target leads
    to a final right-moving state that runs off the tape.  Falling off the
    right marker rejects, reaching the left marker gets stuck.
    """
    alphabet = make_alphabet(alphabet)
    if r.kind != "X":
        raise ValueError("only X-rankers can be compiled; mirror Y-rankers instead")
    for _, a in r:
        if a not in alphabet:
            raise AlphabetError(f"ranker letter {a!r} not in alphabet")
    names = [f"q{i + 1}" for i in range(len(r))]
    done = "done"
    xs = tuple(n for n, (m, _) in zip(names, r) if m == "X") + (done,)
    ys = tuple(n for n, (m, _) in zip(names, r) if m == "Y")
    trans = set()
    for i, (m, target) in enumerate(r):
        z = names[i]
        nxt = names[i + 1] if i + 1 < len(r) else done
        for a in alphabet:
            trans.add((z, a, nxt if a == target else z))
        if m == "X":
            trans.add((z, RIGHT_MARKER, z))
    trans |= {(done, a, done) for a in (*alphabet, RIGHT_MARKER)}
    return TwoWayAutomaton(alphabet, xs, ys, frozenset(trans), names[0], frozenset({done}))


def ranker_dfa(r: Ranker, alphabet: Iterable[str]) -> Dfa:
    """Minimal DFA of the domain of ``r``; Y-rankers go through the mirror image."""
    alphabet = make_alphabet(alphabet)
    if r.kind == "X":
        return minimize(to_one_way_dfa(compile_ranker(r, alphabet)))
    mirrored = to_one_way_dfa(compile_ranker(r.mirror(), alphabet))
    return to_minimal_dfa(reverse(mirrored))


# -- monomials -------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """``A_1* a_1 ... A_k* a_k A_{k+1}*``; an empty block stands for the empty word."""

    blocks: tuple[frozenset[str], ...]
    markers: tuple[str, ...]
    alphabet: tuple[str, ...]

    def __post_init__(self):
        make_alphabet(self.alphabet)
        if len(self.blocks) != len(self.markers) + 1:
            raise ValueError("a monomial has one more block than markers")
        letters = set(self.alphabet)
        for b in self.blocks:
            if not set(b) <= letters:
                raise AlphabetError(f"block {sorted(b)} leaves the alphabet")
        for a in self.markers:
            if a not in letters:
                raise AlphabetError(f"marker {a!r} not in alphabet")

    @classmethod
    def of(cls, blocks: Sequence[Iterable[str]], markers: Sequence[str], alphabet) -> Monomial:
        return cls(tuple(frozenset(b) for b in blocks), tuple(markers), make_alphabet(alphabet))

    @property
    def k(self) -> int:
        return len(self.markers)

    def __str__(self) -> str:
        def block(b):
            return "{" + ",".join(sorted(b)) + "}*"

        parts = [block(self.blocks[0])]
        for a, b in zip(self.markers, self.blocks[1:]):
            parts += [a, block(b)]
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"blocks": [sorted(b) for b in self.blocks], "markers": list(self.markers)}

    @classmethod
    def from_json(cls, obj: dict, alphabet) -> Monomial:
        return cls.of(obj["blocks"], obj["markers"], alphabet)


def monomial_nfa(p: Monomial) -> Nfa:
    """States ``0..k``: state ``i`` loops on block ``i`` and reads marker ``i`` to advance."""
    trans = {(i, a, i) for i, b in enumerate(p.blocks) for a in b}
    trans |= {(i, a, i + 1) for i, a in enumerate(p.markers)}
    return Nfa(p.alphabet, p.k + 1, frozenset(trans), frozenset({0}), frozenset({p.k}))


def ambiguity_witness(p: Monomial) -> str | None:
    """Shortest word with two factorizations, found in the square of the block NFA."""
    nfa = monomial_nfa(p)
    n = nfa.n
    trans = set()
    for p1, a, q1 in nfa.transitions:
        for p2, b, q2 in nfa.transitions:
            if a == b:
                trans.add((p1 * n + p2, a, q1 * n + q2))
    square = Nfa(p.alphabet, n * n, frozenset(trans), frozenset({0}), frozenset({p.k * n + p.k}))
    off = frozenset(i for i in _trim_ids(square) if i // n != i % n)
    if not off:
        return None
    # shortest accepted word passing through an off-diagonal state
    start = (0, False)
    prev = {start: None}
    queue = deque([start])
    while queue:
        state, hit = queue.popleft()
        if hit and state == p.k * n + p.k:
            word = []
            node = (state, hit)
            while prev[node] is not None:
                node, a = prev[node]
                word.append(a)
            return "".join(reversed(word))
        for a in p.alphabet:
            for nxt in square.successors(state, a):
                key = (nxt, hit or nxt in off)
                if key not in prev:
                    prev[key] = ((state, hit), a)
                    queue.append(key)
    raise AssertionError("off-diagonal trim state without witness")  # pragma: no cover


def _trim_ids(a: Nfa) -> set[int]:
    fwd = {q for q in a.initial}
    todo = list(fwd)
    while todo:
        p = todo.pop()
        for q in a.graph[p]:
            if q not in fwd:
                fwd.add(q)
                todo.append(q)
    back: dict[int, list[int]] = {}
    for p, _, q in a.transitions:
        back.setdefault(q, []).append(p)
    bwd = set(a.final)
    todo = list(bwd)
    while todo:
        q = todo.pop()
        for p in back.get(q, ()):
            if p not in bwd:
                bwd.add(p)
                todo.append(p)
    return fwd & bwd


def monomial_check(p: Monomial, which: str) -> bool:
    if which == "unambiguous":
        return ambiguity_witness(p) is None
    if which == "restricted":
        return not any(
            set(p.markers[i:]) <= p.blocks[i] for i in range(p.k)
        )
    raise ValueError(f"unknown monomial property {which!r}")


class ExtractionError(RuntimeError):
    def __init__(self, message: str, diagnostics: Sequence[str] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


def monomial_of_run(t: TwoWayAutomaton, word: str) -> Monomial:
    """``P(u)``: markers at every state change up to the first final state."""
    run = simulate(t, word)
    positions = set()
    for (z, i), (z2, _) in zip(run.trace, run.trace[1:]):
        if z2 != z and 1 <= i <= len(word):
            positions.add(i)
        if z2 in t.final:
            break
    cuts = sorted(positions)
    blocks, markers, last = [], [], 0
    for i in cuts:
        blocks.append(frozenset(word[last:i - 1]))
        markers.append(word[i - 1])
        last = i
    blocks.append(frozenset(t.alphabet))
    return Monomial(tuple(blocks), tuple(markers), t.alphabet)


def _accepted_words(d: Dfa, max_len: int):
    """Accepted words of a complete DFA in shortlex order, generated lazily."""
    coreach = {q for q in d.states if q in d.final}
    changed = True
    while changed:
        changed = False
        for q in d.states:
            if q not in coreach and any(r in coreach for r in d.delta[q] if r is not None):
                coreach.add(q)
                changed = True
    level = [("", d.start)] if d.start in coreach else []
    for k in range(max_len + 1):
        for w, q in level:
            if q in d.final:
                yield w
        if k == max_len:
            return
        level = [
            (w + a, r)
            for w, q in level
            for a, r in zip(d.alphabet, d.delta[q])
            if r is not None and r in coreach
        ]


def extract_monomials(t: TwoWayAutomaton, max_len: int = 12) -> list[Monomial]:
    """Unambiguous monomials whose union is the language of a flip one-pass po2dfa.

    Accepted words are visited in shortlex order; each word not yet covered
    contributes its run monomial, which must be unambiguous and contained in
    the language.  Offending monomials are reported through
    :class:`ExtractionError` if the union cannot be closed within
    ``max_len``.
    """
    _require_shapes(t, "one_pass", "partially_ordered", "flip", complete=True)
    target = minimize(to_one_way_dfa(t))
    out: list[Monomial] = []
    problems: list[str] = []
    covered = empty_dfa(t.alphabet)
    if compare(covered, target).holds:
        return out
    for word in _accepted_words(target, max_len):
        if covered.accepts(word):
            continue
        mono = monomial_of_run(t, word)
        nfa = monomial_nfa(mono)
        bad = compare(nfa, target, "included")
        if not bad.holds:
            problems.append(f"{mono} from {word!r} accepts {bad.counterexample!r} outside the language")
            continue
        witness = ambiguity_witness(mono)
        if witness is not None:
            problems.append(f"{mono} from {word!r} is ambiguous on {witness!r}")
            continue
        if mono.k > len(t.states):
            problems.append(f"{mono} from {word!r} has more markers than states")
        out.append(mono)
        covered = minimize(combine(covered, nfa, "union"))
        if compare(covered, target).holds:
            return out
    raise ExtractionError(f"monomials did not cover the language up to length {max_len}", problems)


def monomials_union(ms: Sequence[Monomial], alphabet) -> Nfa:
    return union_all(make_alphabet(alphabet), [monomial_nfa(m) for m in ms])


# -- JSON ------------------------------------------------------------------


def to_json(t: TwoWayAutomaton) -> dict:
    return {
        "alphabet": list(t.alphabet),
        "states": list(t.states),
        "right_states": list(t.right_states),
        "left_states": list(t.left_states),
        "initial": [] if t.initial is None else [t.initial],
        "final": sorted(t.final),
        "transitions": [list(tr) for tr in sorted(t.transitions)],
    }


def from_json(obj: dict) -> TwoWayAutomaton:
    try:
        alphabet = make_alphabet(obj["alphabet"])
        xs = tuple(str(z) for z in obj.get("right_states", []))
        ys = tuple(str(z) for z in obj.get("left_states", []))
        initial = [str(z) for z in obj.get("initial", [])]
        if len(initial) > 1:
            raise ValueError("a deterministic two-way automaton has one initial state")
        trans = frozenset((str(z), str(a), str(t)) for z, a, t in obj.get("transitions", []))
        declared = obj.get("states")
        if declared is not None and set(map(str, declared)) != set(xs) | set(ys):
            raise ValueError("states must be the union of right_states and left_states")
        return TwoWayAutomaton(alphabet, xs, ys, trans, initial[0] if initial else None,
                               frozenset(str(z) for z in obj.get("final", [])))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed two-way automaton JSON: {exc}") from exc


def is_two_way_json(obj: dict) -> bool:
    return "right_states" in obj or "left_states" in obj
