"""Finite monoids: transition monoids, Green's relations and variety tests.

Elements are dense ids ``0..size-1`` with an explicit multiplication table.
For a word ``uv`` the element is ``h(u)`` followed by ``h(v)``: a transition
monoid element is a map on DFA states and ``table[x, y]`` applies ``x``
first.  Getting this backwards silently swaps the R and L relations.

Ids are assigned in shortlex order of the shortest word mapping to each
element, so ``representatives`` and every dump are canonical.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from ._graph import component_map, condensation_reach, tarjan
from .automata import Dfa, canonical, to_minimal_dfa

#: Transformation monoids larger than this are refused; the multiplication
#: table is dense and most queries are quadratic in the size.
MAX_MONOID_SIZE = 20000


class MonoidTooLarge(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    table: np.ndarray
    identity: int
    generators: Mapping[str, int]
    representatives: tuple[str, ...]
    transformations: np.ndarray | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.representatives)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.generators)

    @property
    def elements(self) -> range:
        return range(self.size)

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def evaluate(self, word: str) -> int:
        x = self.identity
        for a in word:
            x = int(self.table[x, self.generators[a]])
        return x

    @cached_property
    def omega(self) -> np.ndarray:
        """``omega[x]`` is the idempotent power of ``x``."""
        size = self.size
        table = self.table
        result = np.full(size, -1, dtype=np.int64)
        xs = np.arange(size)
        power = xs.copy()
        for _ in range(size + 1):
            idem = (table[power, power] == power) & (result < 0)
            result[idem] = power[idem]
            if (result >= 0).all():
                break
            power = table[power, xs]
        result.flags.writeable = False
        return result

    @classmethod
    def from_table(cls, table, identity: int, generators: Mapping[str, int]) -> FiniteMonoid:
        """Build an abstract monoid, checking associativity, the unit and generation."""
        tab = np.array(table, dtype=np.int64)
        size = tab.shape[0]
        if tab.shape != (size, size) or size == 0:
            raise ValueError("table must be a non-empty square array")
        if tab.min() < 0 or tab.max() >= size:
            raise ValueError("table entries out of range")
        idx = np.arange(size)
        if not ((tab[identity, :] == idx).all() and (tab[:, identity] == idx).all()):
            raise ValueError("identity law fails")
        if not check_associative(tab):
            raise ValueError("table is not associative")
        reps: dict[int, str] = {identity: ""}
        order = [identity]
        i = 0
        gens = dict(generators)
        while i < len(order):
            x = order[i]
            for a, g in gens.items():
                y = int(tab[x, g])
                if y not in reps:
                    reps[y] = reps[x] + a
                    order.append(y)
            i += 1
        if len(order) != size:
            raise ValueError("generators do not generate the whole monoid")
        # renumber in shortlex order of representatives
        perm = np.array(order)
        inv = np.empty(size, dtype=np.int64)
        inv[perm] = np.arange(size)
        new_table = inv[tab[np.ix_(perm, perm)]]
        new_table.flags.writeable = False
        return cls(
            new_table,
            int(inv[identity]),
            {a: int(inv[g]) for a, g in gens.items()},
            tuple(reps[x] for x in order),
        )


def check_associative(table: np.ndarray) -> bool:
    """Exhaustive ``(xy)z == x(yz)`` check, one row of ``x`` at a time."""
    tab = np.asarray(table)
    for x in range(tab.shape[0]):
        left = tab[tab[x, :], :]  # (x*y)*z indexed [y, z]
        right = tab[x, tab]  # x*(y*z) indexed [y, z]
        if not np.array_equal(left, right):
            return False
    return True


def cyclic_group(order: int, letter: str = "a") -> FiniteMonoid:
    idx = np.arange(order)
    return FiniteMonoid.from_table((idx[:, None] + idx[None, :]) % order, 0, {letter: 1 % order})


def transition_monoid(d: Dfa, max_size: int = MAX_MONOID_SIZE) -> tuple[FiniteMonoid, frozenset[int]]:
    """Transition monoid of a complete DFA and the set of elements sending the start state into F.

    On the minimal DFA this is the syntactic monoid with ``h_L(L)``.
    """
    if not isinstance(d, Dfa) or not d.complete:
        raise ValueError("transition_monoid needs a complete DFA")
    n = d.n
    gens = [np.array([row[i] for row in d.delta], dtype=np.int64) for i in range(len(d.alphabet))]
    ident = tuple(range(n))
    ids = {ident: 0}
    elems = [np.arange(n, dtype=np.int64)]
    reps = [""]
    parent = [-1]
    via = [-1]
    right: list[list[int]] = [[] for _ in d.alphabet]
    i = 0
    while i < len(elems):
        f = elems[i]
        for k, g in enumerate(gens):
            h = g[f]
            key = tuple(h.tolist())
            j = ids.get(key)
            if j is None:
                j = len(elems)
                if j >= max_size:
                    raise MonoidTooLarge(f"transition monoid exceeds {max_size} elements")
                ids[key] = j
                elems.append(h)
                reps.append(reps[i] + d.alphabet[k])
                parent.append(i)
                via.append(k)
            right[k].append(j)
        i += 1
    size = len(elems)
    right_arr = [np.array(r, dtype=np.int64) for r in right]
    dtype = np.int32 if size < 2**31 else np.int64
    table = np.empty((size, size), dtype=dtype)
    table[:, 0] = np.arange(size)
    for j in range(1, size):
        table[:, j] = right_arr[via[j]][table[:, parent[j]]]
    trans = np.stack(elems)
    _verify_transformations(table, trans)
    table.flags.writeable = False
    trans.flags.writeable = False
    monoid = FiniteMonoid(
        table,
        0,
        {a: int(right_arr[k][0]) for k, a in enumerate(d.alphabet)},
        tuple(reps),
        trans,
    )
    for x, w in enumerate(reps):
        if not all(d.run(w, q) == trans[x][q] for q in range(n)):
            raise AssertionError(f"representative {w!r} does not evaluate to element {x}")
    accepting = frozenset(int(x) for x in np.nonzero(np.isin(trans[:, d.start], list(d.final)))[0])
    return monoid, accepting


def _verify_transformations(table: np.ndarray, trans: np.ndarray) -> None:
    # table[x, y] must be the map "x then y"; composition of maps is
    # associative, so this also certifies associativity of the table.
    for x in range(trans.shape[0]):
        expected = trans[:, trans[x]]
        if not np.array_equal(trans[table[x, :]], expected):
            raise AssertionError(f"multiplication table row {x} is inconsistent")


def syntactic_monoid(a) -> tuple[FiniteMonoid, frozenset[int], Dfa]:
    """Syntactic monoid, ``h_L(L)`` and the minimal DFA it was computed from."""
    d = to_minimal_dfa(a)
    m, p = transition_monoid(d)
    return m, p, d


def omega_power(m: FiniteMonoid, x: int) -> int:
    return int(m.omega[x])


def index_and_period(m: FiniteMonoid, x: int) -> tuple[int, int]:
    """Smallest ``i >= 1, p >= 1`` with ``x^(i+p) == x^i``."""
    seen: dict[int, int] = {}
    power, k = x, 1
    while power not in seen:
        seen[power] = k
        power = m.mul(power, x)
        k += 1
    i = seen[power]
    return i, k - i


def exponent(m: FiniteMonoid) -> int:
    """Smallest ``w >= 1`` such that ``x^w`` is idempotent for every ``x``."""
    period = 1
    index = 1
    for x in m.elements:
        i, p = index_and_period(m, x)
        period = period * p // math.gcd(period, p)
        index = max(index, i)
    return period * math.ceil(index / period)


@dataclass(frozen=True)
class GreenStructure:
    """Green's R, L and J classes with their orders.

    Class ids are ordered by the smallest element they contain.
    ``r_order[c]`` is a bitmask of the R-classes ``d`` with ``d <=_R c``
    (and likewise for the other orders).
    """

    r_class: tuple[int, ...]
    l_class: tuple[int, ...]
    j_class: tuple[int, ...]
    r_order: tuple[int, ...]
    l_order: tuple[int, ...]
    j_order: tuple[int, ...]

    def classes(self, kind: str) -> tuple[int, ...]:
        return {"R": self.r_class, "L": self.l_class, "J": self.j_class}[kind]

    def order(self, kind: str) -> tuple[int, ...]:
        return {"R": self.r_order, "L": self.l_order, "J": self.j_order}[kind]

    def leq(self, kind: str, x: int, y: int) -> bool:
        cls = self.classes(kind)
        return bool(self.order(kind)[cls[y]] >> cls[x] & 1)

    def r_leq(self, x: int, y: int) -> bool:
        return self.leq("R", x, y)

    def l_leq(self, x: int, y: int) -> bool:
        return self.leq("L", x, y)

    def j_leq(self, x: int, y: int) -> bool:
        return self.leq("J", x, y)

    def members(self, kind: str, cid: int) -> list[int]:
        return [x for x, c in enumerate(self.classes(kind)) if c == cid]


def _classes_from_graph(size: int, succ) -> tuple[tuple[int, ...], tuple[int, ...]]:
    comps = tarjan(size, succ)
    comp_of = component_map(size, comps)
    reach = condensation_reach(comps, comp_of, succ)
    # renumber: class ids by smallest member
    order = sorted(range(len(comps)), key=lambda c: comps[c][0])
    new_id = {c: i for i, c in enumerate(order)}
    cls = tuple(new_id[comp_of[x]] for x in range(size))
    below = []
    for c in order:
        mask = 0
        bits = reach[c]
        d = 0
        while bits:
            if bits & 1:
                mask |= 1 << new_id[d]
            bits >>= 1
            d += 1
        below.append(mask)
    return cls, tuple(below)


def green_classes(m: FiniteMonoid) -> GreenStructure:
    """Green's relations via reachability in the Cayley graphs.

    ``x <=_R y`` iff ``x`` lies in ``yM``, i.e. ``x`` is reachable from ``y``
    by right multiplication with generators; L uses left multiplication and
    J both.
    """
    table = m.table
    gens = list(m.generators.values())
    rows = [table[:, g].tolist() for g in gens]  # x -> x*g
    cols = [table[g, :].tolist() for g in gens]  # x -> g*x
    right = [[r[x] for r in rows] for x in m.elements]
    left = [[c[x] for c in cols] for x in m.elements]
    both = [right[x] + left[x] for x in m.elements]
    r_class, r_order = _classes_from_graph(m.size, right.__getitem__)
    l_class, l_order = _classes_from_graph(m.size, left.__getitem__)
    j_class, j_order = _classes_from_graph(m.size, both.__getitem__)
    return GreenStructure(r_class, l_class, j_class, r_order, l_order, j_order)


def _mask(m: FiniteMonoid, p: Iterable[int]) -> np.ndarray:
    mask = np.zeros(m.size, dtype=bool)
    mask[list(p)] = True
    return mask


def ideal_violation(m: FiniteMonoid, p: Iterable[int], kind: str) -> tuple[int, int, int] | None:
    """First ``(x, s, product)`` with ``x`` in ``p`` but the product outside.

    For ``right`` the product is ``x*s``, for ``left`` it is ``s*x``;
    ``two_sided`` reports whichever side fails first.
    """
    mask = _mask(m, p)
    members = np.nonzero(mask)[0]
    kinds = {"right": ("right",), "left": ("left",), "two_sided": ("right", "left")}
    if kind not in kinds:
        raise ValueError(f"unknown ideal kind {kind!r}")
    for side in kinds[kind]:
        prods = m.table[members, :] if side == "right" else m.table[:, members].T
        bad = ~mask[prods]
        if bad.any():
            i, s = np.argwhere(bad)[0]
            return int(members[i]), int(s), int(prods[i, s])
    return None


def is_ideal_subset(m: FiniteMonoid, p: Iterable[int], kind: str) -> bool:
    """``PM <= P`` (right), ``MP <= P`` (left) or ``MPM <= P`` (two_sided)."""
    return ideal_violation(m, p, kind) is None


def class_violation(
    m: FiniteMonoid, p: Iterable[int], kind: str, green: GreenStructure | None = None
) -> tuple[int, int] | None:
    """An element inside ``p`` and one outside it sharing a ``kind``-class."""
    green = green or green_classes(m)
    cls = green.classes(kind)
    inside: dict[int, int] = {}
    outside: dict[int, int] = {}
    pset = set(p)
    for x in m.elements:
        (inside if x in pset else outside).setdefault(cls[x], x)
    for c in sorted(inside.keys() & outside.keys()):
        return inside[c], outside[c]
    return None


def is_union_of_classes(
    m: FiniteMonoid, p: Iterable[int], kind: str, green: GreenStructure | None = None
) -> bool:
    if kind not in ("R", "L", "J"):
        raise ValueError(f"unknown Green relation {kind!r}")
    return class_violation(m, p, kind, green) is None


def aperiodic_violation(m: FiniteMonoid) -> int | None:
    om = m.omega
    bad = np.nonzero(m.table[om, np.arange(m.size)] != om)[0]
    return int(bad[0]) if len(bad) else None


def is_aperiodic(m: FiniteMonoid) -> bool:
    """``x^w x == x^w`` for every element."""
    return aperiodic_violation(m) is None


def da_violation(m: FiniteMonoid) -> tuple[int, int] | None:
    table, om = m.table, m.omega
    ys = np.arange(m.size)
    for x in m.elements:
        e = om[table[x, ys]]
        exe = table[table[e, x], e]
        bad = np.nonzero(exe != e)[0]
        if len(bad):
            return x, int(bad[0])
    return None


def is_in_DA(m: FiniteMonoid) -> bool:
    """``(xy)^w == (xy)^w x (xy)^w`` for all ``x, y``."""
    return da_violation(m) is None


def preimage_dfa(m: FiniteMonoid, subset: Iterable[int]) -> Dfa:
    """Right Cayley automaton of ``m`` accepting ``h^-1(subset)``."""
    gens = [m.generators[a] for a in m.alphabet]
    rows = tuple(tuple(int(m.table[x, g]) for g in gens) for x in m.elements)
    return canonical(Dfa(m.alphabet, rows, m.identity, frozenset(int(x) for x in subset)))


def to_json(m: FiniteMonoid, accepting: Iterable[int], green: GreenStructure | None = None) -> dict:
    green = green or green_classes(m)
    return {
        "size": m.size,
        "identity": m.identity,
        "table": m.table.reshape(-1).tolist(),
        "generators": dict(m.generators),
        "representatives": list(m.representatives),
        "accepting": sorted(int(x) for x in accepting),
        "green": {
            "R": list(green.r_class),
            "L": list(green.l_class),
            "J": list(green.j_class),
        },
    }
