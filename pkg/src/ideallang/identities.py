"""Omega-terms, lattice identities and two independent ways to check them.

``monoid`` mode is exact: variables range over the syntactic monoid and
``t^w`` is the idempotent power.  ``words`` mode substitutes short words for
the variables, expands ``t^w`` literally as ``t^(n!)`` and runs the minimal
DFA; it can only refute.  A refutation in words mode is sound once ``n!`` is
at least the number of DFA states, which is why only the largest requested
``n`` is used by default.

Both modes share one evaluation engine.  Each side of the identity is split
into blocks of variables that occur together, the distinct value pairs of
every block are enumerated, and a variable that opens (or closes) both sides
is folded into a context test instead of being enumerated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .automata import Dfa, all_words, to_minimal_dfa
from .monoid import FiniteMonoid, transition_monoid

VARIABLES = "stxyzpq"
DEFAULT_EXPANSION_CAP = 1_000_000
_CHUNK = 1 << 22


class ExpansionTooLarge(ValueError):
    pass


class TermSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Cat:
    parts: tuple


@dataclass(frozen=True)
class Omega:
    body: object


OmegaTerm = Union[Var, Cat, Omega]


@dataclass(frozen=True)
class LatticeIdentity:
    lhs: OmegaTerm
    rhs: OmegaTerm
    mode: str  # "implies" or "iff"

    def __post_init__(self):
        if self.mode not in ("implies", "iff"):
            raise ValueError(f"unknown identity mode {self.mode!r}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(sorted(variables(self.lhs) | variables(self.rhs)))

    def __str__(self) -> str:
        arrow = "=>" if self.mode == "implies" else "<=>"
        return f"{format_term(self.lhs)} {arrow} {format_term(self.rhs)}"


def variables(t: OmegaTerm) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset({t.name})
    if isinstance(t, Omega):
        return variables(t.body)
    return frozenset().union(*(variables(p) for p in t.parts))


def format_term(t: OmegaTerm) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Omega):
        return f"({format_term(t.body)})^w"
    return "".join(format_term(p) for p in t.parts)


# -- parsing ---------------------------------------------------------------


def _cat(parts: list) -> OmegaTerm:
    return parts[0] if len(parts) == 1 else Cat(tuple(parts))


def parse_term(text: str) -> OmegaTerm:
    """Parse the text syntax: single-letter variables, juxtaposition, ``(t)^w``."""
    src = "".join(text.split())
    pos = 0

    def term(stop: str | None) -> OmegaTerm:
        nonlocal pos
        parts = []
        while pos < len(src) and src[pos] != stop:
            ch = src[pos]
            if ch == "(":
                pos += 1
                inner = term(")")
                if pos >= len(src):
                    raise TermSyntaxError(f"missing ')' in {text!r}")
                pos += 1
                node = inner
            elif ch in VARIABLES:
                pos += 1
                node = Var(ch)
            else:
                raise TermSyntaxError(f"unexpected {ch!r} at {pos} in {text!r}")
            while src.startswith("^w", pos):
                pos += 2
                node = Omega(node)
            parts.append(node)
        if not parts:
            raise TermSyntaxError(f"empty term in {text!r}")
        return _cat(parts)

    result = term(None)
    return result


def parse_identity(text: str) -> LatticeIdentity:
    if "<=>" in text:
        lhs, rhs = text.split("<=>", 1)
        mode = "iff"
    elif "=>" in text:
        lhs, rhs = text.split("=>", 1)
        mode = "implies"
    else:
        raise TermSyntaxError(f"identity needs '=>' or '<=>': {text!r}")
    return LatticeIdentity(parse_term(lhs), parse_term(rhs), mode)


CATALOG: dict[str, LatticeIdentity] = {
    name: parse_identity(text)
    for name, text in {
        "right-ideal": "y => yz",
        "left-ideal": "y => xy",
        "two-sided-ideal": "y => xyz",
        "bc-right": "z(xy)^w x <=> z(xy)^w",
        "bc-left": "s(ts)^w z <=> (ts)^w z",
        "bc-two-sided": "s(ts)^w z(xy)^w x <=> (ts)^w z(xy)^w",
        "da": "p(xy)^w q <=> p(xy)^w x(xy)^w q",
    }.items()
}

# Not part of the CLI catalog; used by the bounded aperiodicity oracle.
APERIODIC = parse_identity("p(x)^w q <=> p(x)^w x q")


# -- expansion and single-assignment evaluation ---------------------------


def expand_term(t: OmegaTerm, n: int, cap: int = DEFAULT_EXPANSION_CAP) -> str:
    """The word ``t(n)`` over the variables: every ``^w`` becomes ``^(n!)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    fact = math.factorial(n)

    def length(u) -> int:
        if isinstance(u, Var):
            return 1
        if isinstance(u, Omega):
            return length(u.body) * fact
        return sum(length(p) for p in u.parts)

    if length(t) > cap:
        raise ExpansionTooLarge(f"expansion of {format_term(t)} at n={n} exceeds {cap}")

    def expand(u) -> str:
        if isinstance(u, Var):
            return u.name
        if isinstance(u, Omega):
            return expand(u.body) * fact
        return "".join(expand(p) for p in u.parts)

    return expand(t)


def eval_in_monoid(t: OmegaTerm, assignment: Mapping[str, int], m: FiniteMonoid) -> int:
    if isinstance(t, Var):
        try:
            return int(assignment[t.name])
        except KeyError:
            raise KeyError(f"unbound variable {t.name!r}") from None
    if isinstance(t, Omega):
        return int(m.omega[eval_in_monoid(t.body, assignment, m)])
    x = m.identity
    for p in t.parts:
        x = m.mul(x, eval_in_monoid(p, assignment, m))
    return x


# -- evaluation domains ----------------------------------------------------


class _MonoidDomain:
    def __init__(self, m: FiniteMonoid, accepting):
        self.m = m
        self.atoms = np.arange(m.size, dtype=np.int64)
        self.unit = m.identity
        self._table = m.table
        self._omega = m.omega
        self._acc = np.zeros(m.size, dtype=bool)
        self._acc[list(accepting)] = True

    def mul(self, a, b):
        return self._table[a, b].astype(np.int64)

    def omega(self, a):
        return self._omega[a]

    def accept(self, a):
        return self._acc[a]

    def word(self, atom_index: int) -> str:
        return self.m.representatives[atom_index]


class _WordsDomain:
    """DFA transformations of short words, encoded as base-``n`` integers."""

    def __init__(self, d: Dfa, n: int, max_image: int):
        self.d = d
        self.nq = d.n
        if self.nq ** self.nq >= 2**62:
            raise ValueError("words mode supports DFAs with at most 15 states")
        self.fact = math.factorial(n)
        self._pow = np.array([self.nq**q for q in range(self.nq)], dtype=np.int64)
        self.unit = int(self._encode(np.arange(self.nq)[None, :])[0])
        codes, words = [], []
        seen = set()
        for w in all_words(d.alphabet, max_image):
            f = np.array([d.run(w, q) for q in range(self.nq)], dtype=np.int64)
            c = int(self._encode(f[None, :])[0])
            if c not in seen:
                seen.add(c)
                codes.append(c)
                words.append(w)
        self.atoms = np.array(codes, dtype=np.int64)
        self.words = words
        self._final = np.zeros(self.nq, dtype=bool)
        self._final[list(d.final)] = True

    def _encode(self, digits):
        return (digits * self._pow).sum(axis=-1)

    def _decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._pow) % self.nq

    def mul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        fa, fb = self._decode(a), self._decode(b)
        return self._encode(np.take_along_axis(fb, fa, axis=-1))

    def omega(self, a):
        # literal power a^(n!) by repeated squaring
        result = np.full(np.shape(a), self.unit, dtype=np.int64)
        base = np.asarray(a, dtype=np.int64)
        k = self.fact
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def accept(self, a):
        start_image = (np.asarray(a, dtype=np.int64) // self._pow[self.d.start]) % self.nq
        return self._final[start_image]

    def word(self, atom_index: int) -> str:
        return self.words[atom_index]


# -- the engine ------------------------------------------------------------


def _factors(t: OmegaTerm) -> list:
    if isinstance(t, Cat):
        return [f for p in t.parts for f in _factors(p)]
    return [t]


def _eval_vec(dom, t, env):
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Omega):
        return dom.omega(_eval_vec(dom, t.body, env))
    out = None
    for p in t.parts:
        v = _eval_vec(dom, p, env)
        out = v if out is None else dom.mul(out, v)
    return out


def _eval_block(dom, factors, env, shape):
    if not factors:
        return np.full(shape, dom.unit, dtype=np.int64)
    out = _eval_vec(dom, factors[0], env)
    for f in factors[1:]:
        out = dom.mul(out, _eval_vec(dom, f, env))
    return np.broadcast_to(out, shape).astype(np.int64)


def _blocks(identity: LatticeIdentity):
    """Split both sides into aligned blocks of co-occurring variables.

    Returns ``[(vars, lhs_factors, rhs_factors), ...]`` in a left-to-right
    order valid for both sides, or one all-variable block when the sides
    interleave their variables.
    """
    lf, rf = _factors(identity.lhs), _factors(identity.rhs)
    parent: dict[str, str] = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            v = parent[v]
        return v

    for f in lf + rf:
        vs = sorted(variables(f))
        for v in vs[1:]:
            parent[find(v)] = find(vs[0])
    for v in identity.variables:
        find(v)

    def runs(fs):
        seq = []
        for f in fs:
            c = find(next(iter(variables(f))))
            if not seq or seq[-1] != c:
                seq.append(c)
        return seq

    fallback = [(identity.variables, lf, rf)]
    seqs = [runs(lf), runs(rf)]
    if any(len(s) != len(set(s)) for s in seqs):
        return fallback
    comps = sorted({find(v) for v in identity.variables})
    edges = {c: set() for c in comps}
    indeg = {c: 0 for c in comps}
    for s in seqs:
        for a, b in zip(s, s[1:]):
            if b not in edges[a]:
                edges[a].add(b)
                indeg[b] += 1
    first_seen = {c: i for i, c in enumerate(dict.fromkeys(seqs[0] + seqs[1]))}
    order = []
    ready = sorted((c for c in comps if indeg[c] == 0), key=first_seen.get)
    while ready:
        c = ready.pop(0)
        order.append(c)
        for b in edges[c]:
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
        ready.sort(key=first_seen.get)
    if len(order) != len(comps):
        return fallback
    out = []
    for c in order:
        vs = tuple(sorted(v for v in identity.variables if find(v) == c))
        out.append((
            vs,
            [f for f in lf if find(next(iter(variables(f)))) == c],
            [f for f in rf if find(next(iter(variables(f)))) == c],
        ))
    return out


def _unique_pairs(lv, rv, *payload):
    """Deduplicate value pairs; keep the first payload row of each."""
    if len(lv) and max(lv.max(), rv.max()) < 2**31 and min(lv.min(), rv.min()) >= 0:
        _, idx = np.unique((lv << 32) | rv, return_index=True)
    else:
        _, idx = np.unique(np.stack([lv, rv], axis=1), axis=0, return_index=True)
    idx.sort()
    return (lv[idx], rv[idx]) + tuple(p[idx] for p in payload)


def _block_pairs(dom, vs, lfs, rfs):
    """Distinct (lhs block, rhs block) values over all atom assignments of ``vs``."""
    na = len(dom.atoms)
    k = len(vs)
    if k == 0:
        return (np.array([dom.unit]), np.array([dom.unit]), np.zeros((1, 0), dtype=np.int64))
    rest = k - 1
    chunk_rows = max(1, _CHUNK // max(1, na**rest))
    outs_l, outs_r, outs_w = [], [], []
    for start in range(0, na, chunk_rows):
        first = np.arange(start, min(na, start + chunk_rows))
        grids = np.meshgrid(first, *([np.arange(na)] * rest), indexing="ij")
        idx = [g.reshape(-1) for g in grids]
        env = {v: dom.atoms[i] for v, i in zip(vs, idx)}
        shape = idx[0].shape
        lv = _eval_block(dom, lfs, env, shape)
        rv = _eval_block(dom, rfs, env, shape)
        witness = np.stack(idx, axis=1)
        lv, rv, witness = _unique_pairs(lv, rv, witness)
        outs_l.append(lv)
        outs_r.append(rv)
        outs_w.append(witness)
    return _unique_pairs(np.concatenate(outs_l), np.concatenate(outs_r), np.concatenate(outs_w))


def _single_context(dom, lv, rv, on, left, implies):
    """Check pairs under one context variable via acceptance profiles.

    The profile of a value ``v`` is the vector ``[c v in P for c in atoms]``
    (or ``v c`` for a right context); pairs are compared class by class.
    Returns ``(pair index, atom, l_in, r_in)`` or ``None``.
    """
    atoms = dom.atoms
    values, inverse = np.unique(np.concatenate([lv, rv]), return_inverse=True)
    rows = []
    for side in (0, 1):
        if on[side]:
            prod = dom.mul(atoms[None, :], values[:, None]) if left else dom.mul(
                values[:, None], atoms[None, :])
            rows.append(dom.accept(prod))
        else:
            rows.append(np.broadcast_to(dom.accept(values)[:, None], (len(values), len(atoms))))
    k = len(lv)
    li, ri = inverse[:k], inverse[k:]
    packed = [np.packbits(r, axis=1) for r in rows]
    both = np.concatenate(packed)
    classes, cls = np.unique(both, axis=0, return_inverse=True)
    cls = cls.reshape(-1)
    lc, rc = cls[: len(values)][li], cls[len(values):][ri]
    pairs, first = np.unique(np.stack([lc, rc], axis=1), axis=0, return_index=True)
    profile = np.unpackbits(classes, axis=1, count=len(atoms)).astype(bool)
    order = np.argsort(first)
    pairs, first = pairs[order], first[order]
    step = max(1, _CHUNK // max(1, len(atoms)))
    for s in range(0, len(pairs), step):
        l_in = profile[pairs[s:s + step, 0]]
        r_in = profile[pairs[s:s + step, 1]]
        bad = l_in & ~r_in
        if not implies:
            bad = bad | (r_in & ~l_in)
        hits = np.argwhere(bad)
        if len(hits):
            j, a = (int(v) for v in hits[0])
            return int(first[s + j]), a, bool(l_in[j, a]), bool(r_in[j, a])
    return None


@dataclass(frozen=True)
class IdentityResult:
    """Outcome of an identity check.

    On failure ``assignment`` maps every variable to a word (a representative
    in monoid mode, the substituted image in words mode) and ``lhs_in`` /
    ``rhs_in`` record which side is in the language.
    """

    holds: bool
    assignment: dict | None = None
    lhs_in: bool | None = None
    rhs_in: bool | None = None
    n: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def _run_engine(dom, identity: LatticeIdentity):
    blocks = _blocks(identity)
    # a lone variable at the edge becomes a context on the sides it occurs in
    left_ctx = right_ctx = None
    left_on = right_on = (False, False)

    def edge(block):
        vs, lfs, rfs = block
        if len(vs) != 1 or not all(fs in ([], [Var(vs[0])]) for fs in (lfs, rfs)):
            return None
        return vs[0], (bool(lfs), bool(rfs))

    if blocks and edge(blocks[0]):
        left_ctx, left_on = edge(blocks.pop(0))
    if blocks and edge(blocks[-1]):
        right_ctx, right_on = edge(blocks.pop())

    # combined pairs with a back-pointer trail for witness reconstruction
    lv = np.array([dom.unit], dtype=np.int64)
    rv = np.array([dom.unit], dtype=np.int64)
    trail: list[tuple] = []  # per block: (vars, witness rows, prev index, block index)
    prev_ids = np.zeros(1, dtype=np.int64)
    for vs, lfs, rfs in blocks:
        bl, br, bw = _block_pairs(dom, vs, lfs, rfs)
        nl, nr, ni, nj = [], [], [], []
        step = max(1, _CHUNK // max(1, len(bl)))
        for s in range(0, len(lv), step):
            a = np.arange(s, min(len(lv), s + step))
            ii = np.repeat(a, len(bl))
            jj = np.tile(np.arange(len(bl)), len(a))
            cl = dom.mul(lv[ii], bl[jj])
            cr = dom.mul(rv[ii], br[jj])
            cl, cr, ii, jj = _unique_pairs(cl, cr, ii, jj)
            nl.append(cl)
            nr.append(cr)
            ni.append(ii)
            nj.append(jj)
        lv, rv, prev_ids, blk_ids = _unique_pairs(
            np.concatenate(nl), np.concatenate(nr), np.concatenate(ni), np.concatenate(nj)
        )
        trail.append((vs, bw, prev_ids, blk_ids))

    implies = identity.mode == "implies"
    atoms = dom.atoms
    nl = len(atoms) if left_ctx is not None else 1
    nr = len(atoms) if right_ctx is not None else 1
    # equal values can only disagree when the contexts differ between sides
    if left_on[0] == left_on[1] and right_on[0] == right_on[1]:
        keep = np.nonzero(lv != rv)[0]
    else:
        keep = np.arange(len(lv))

    def grid(vals, side):
        x = vals[:, None, None]
        if left_on[side]:
            x = dom.mul(atoms[None, :, None], x)
        if right_on[side]:
            x = dom.mul(x, atoms[None, None, :])
        return np.broadcast_to(dom.accept(x), (len(vals), nl, nr))

    found = None  # (pair index, left ctx atom, right ctx atom, l_in, r_in)
    if (nl == 1) != (nr == 1) and len(keep):
        found = _single_context(dom, lv[keep], rv[keep], left_on if nr == 1 else right_on,
                                nr == 1, implies)
        if found is not None:
            i, a = found[0], found[1]
            found = (keep[i], a if nr == 1 else None, None if nr == 1 else a) + found[2:]
        keep = keep[:0]
    step = max(1, _CHUNK // (nl * nr))
    for s in range(0, len(keep), step):
        part = keep[s:s + step]
        l_in, r_in = grid(lv[part], 0), grid(rv[part], 1)
        bad = l_in & ~r_in
        if not implies:
            bad = bad | (r_in & ~l_in)
        hits = np.argwhere(bad)
        if len(hits):
            i, a, b = (int(v) for v in hits[0])
            found = (
                part[i],
                a if left_ctx is not None else None,
                b if right_ctx is not None else None,
                bool(l_in[i, a, b]),
                bool(r_in[i, a, b]),
            )
            break

    if found is None:
        return None
    idx, lc, rc, l_in, r_in = found
    assignment: dict[str, int] = {}
    for vs, bw, prev, blk in reversed(trail):
        row = bw[blk[idx]]
        for v, a in zip(vs, row):
            assignment[v] = int(a)
        idx = prev[idx]
    if left_ctx is not None:
        assignment[left_ctx] = lc
    if right_ctx is not None:
        assignment[right_ctx] = rc
    return assignment, l_in, r_in


def check_identity(
    language,
    identity: LatticeIdentity | str,
    mode: str = "monoid",
    *,
    max_n: int = 3,
    min_n: int | None = None,
    max_image: int = 2,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> IdentityResult:
    """Decide (monoid mode) or probe (words mode) a lattice identity.

    ``language`` is any automaton; ``identity`` an object, a catalog name or
    text.  Words mode tries every substitution of words of length at most
    ``max_image`` and every ``n`` in ``min_n..max_n`` (default: ``max_n``
    only); a reported failure is replayed on the literal expansion.
    """
    if isinstance(identity, str):
        identity = CATALOG[identity] if identity in CATALOG else parse_identity(identity)
    d = to_minimal_dfa(language)
    if mode == "monoid":
        m, accepting = transition_monoid(d)
        found = _run_engine(_MonoidDomain(m, accepting), identity)
        if found is None:
            return IdentityResult(True)
        assignment, l_in, r_in = found
        words = {v: m.representatives[a] for v, a in assignment.items()}
        return IdentityResult(False, words, l_in, r_in)
    if mode != "words":
        raise ValueError(f"unknown check mode {mode!r}")
    lo = max_n if min_n is None else min_n
    for n in range(lo, max_n + 1):
        for side in (identity.lhs, identity.rhs):
            expand_term(side, n, cap=cap)  # enforce the cap before doing any work
        dom = _WordsDomain(d, n, max_image)
        found = _run_engine(dom, identity)
        if found is None:
            continue
        assignment, l_in, r_in = found
        words = {v: dom.word(a) for v, a in assignment.items()}
        lw = substitute(expand_term(identity.lhs, n, cap), words)
        rw = substitute(expand_term(identity.rhs, n, cap), words)
        if (d.accepts(lw), d.accepts(rw)) != (l_in, r_in):
            raise AssertionError("words-mode counterexample does not replay")
        return IdentityResult(False, words, l_in, r_in, n)
    return IdentityResult(True)


def substitute(expanded: str, images: Mapping[str, str]) -> str:
    """Apply a homomorphism from variables to words."""
    return "".join(images[v] for v in expanded)


def brute_force_monoid_check(m: FiniteMonoid, accepting, identity: LatticeIdentity) -> bool:
    """Reference check by plain enumeration of every assignment (tiny monoids only)."""
    vs = identity.variables
    acc = set(accepting)
    for values in itertools.product(range(m.size), repeat=len(vs)):
        sigma = dict(zip(vs, values))
        l_in = eval_in_monoid(identity.lhs, sigma, m) in acc
        r_in = eval_in_monoid(identity.rhs, sigma, m) in acc
        if l_in and not r_in:
            return False
        if identity.mode == "iff" and r_in and not l_in:
            return False
    return True
