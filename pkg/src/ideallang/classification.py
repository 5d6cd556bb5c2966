"""Decide ideal-type properties of a regular language and cross-check the answers.

Every verdict comes from the syntactic monoid.  Automaton shapes, the
identity checker and a bounded brute-force oracle are then run as
independent cross-checks, and their agreement is recorded in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from .automata import (
    Automaton,
    Dfa,
    Nfa,
    compare,
    complement,
    membership_table,
    reverse,
    to_minimal_dfa,
    trim,
)
from .identities import APERIODIC, CATALOG, check_identity
from .monoid import (
    FiniteMonoid,
    aperiodic_violation,
    class_violation,
    da_violation,
    green_classes,
    ideal_violation,
    transition_monoid,
)
from .regex import parse_regex
from .shapes import check_shape, shape_violation
from .twoway import TwoWayAutomaton, TwoWayError, to_one_way_dfa, validate

PROPERTIES = (
    "right_ideal",
    "left_ideal",
    "two_sided_ideal",
    "prefix_closed",
    "suffix_closed",
    "factorial",
    "bc_right_ideals",
    "bc_left_ideals",
    "bc_two_sided_ideals",
    "in_DA",
    "aperiodic",
)

DEFAULT_ORACLE_LEN = 8

# property -> (ideal side, applied to the complement?)
_IDEALS = {
    "right_ideal": ("right", False),
    "left_ideal": ("left", False),
    "two_sided_ideal": ("two_sided", False),
    "prefix_closed": ("right", True),
    "suffix_closed": ("left", True),
    "factorial": ("two_sided", True),
}
_CLASSES = {"bc_right_ideals": "R", "bc_left_ideals": "L", "bc_two_sided_ideals": "J"}
_IDENTITY = {
    "right_ideal": ("right-ideal", False),
    "left_ideal": ("left-ideal", False),
    "two_sided_ideal": ("two-sided-ideal", False),
    "prefix_closed": ("right-ideal", True),
    "suffix_closed": ("left-ideal", True),
    "factorial": ("two-sided-ideal", True),
    "bc_right_ideals": ("bc-right", False),
    "bc_left_ideals": ("bc-left", False),
    "bc_two_sided_ideals": ("bc-two-sided", False),
    "in_DA": ("da", False),
}


class LanguageData:
    """Canonical automata and the syntactic monoid of one language, computed on demand."""

    def __init__(self, a: Automaton):
        self.dfa = to_minimal_dfa(a)

    @cached_property
    def monoid(self) -> tuple[FiniteMonoid, frozenset[int]]:
        return transition_monoid(self.dfa)

    @cached_property
    def green(self):
        return green_classes(self.monoid[0])

    @cached_property
    def complement(self) -> Dfa:
        return complement(self.dfa)

    @cached_property
    def trim(self) -> Dfa:
        return trim(self.dfa)

    @cached_property
    def reversed(self) -> Dfa:
        return to_minimal_dfa(reverse(self.dfa))

    @cached_property
    def reversed_trim(self) -> Dfa:
        return trim(self.reversed)

    def word(self, x: int) -> str:
        return self.monoid[0].representatives[x]


# -- the monoid route --------------------------------------------------------


def monoid_route(data: LanguageData, prop: str) -> tuple[bool, dict]:
    m, accepting = data.monoid
    if prop in _IDEALS:
        side, on_complement = _IDEALS[prop]
        subset = frozenset(m.elements) - accepting if on_complement else accepting
        what = "complement of h(L)" if on_complement else "h(L)"
        bad = ideal_violation(m, subset, side)
        if bad is None:
            return True, {"fact": f"{what} is a {side.replace('_', '-')} ideal of M"}
        x, s, _ = bad
        u, v = data.word(x), data.word(s)
        # the product that left the subset decides which side was extended
        if m.mul(x, s) not in subset:
            longer, ext = u + v, "right"
        else:
            longer, ext = v + u, "left"
        if on_complement:
            detail = {"word": longer, "in_language": True, "part": u, "part_in_language": False}
        else:
            detail = {"word": u, "in_language": True, "extended": longer, "extended_in_language": False}
        detail["extended_on"] = ext
        return False, {"fact": f"{what} is not closed under {ext} multiplication", "counterexample": detail}
    if prop in _CLASSES:
        kind = _CLASSES[prop]
        bad = class_violation(m, accepting, kind, data.green)
        if bad is None:
            return True, {"fact": f"h(L) is a union of {kind}-classes"}
        x, y = bad
        return False, {
            "fact": f"an {kind}-class meets h(L) and its complement",
            "counterexample": {"in_language": data.word(x), "not_in_language": data.word(y)},
        }
    if prop == "in_DA":
        bad = da_violation(m)
        if bad is None:
            return True, {"fact": "(xy)^w = (xy)^w x (xy)^w holds in M"}
        x, y = bad
        return False, {"fact": "(xy)^w != (xy)^w x (xy)^w in M",
                       "counterexample": {"x": data.word(x), "y": data.word(y)}}
    if prop == "aperiodic":
        bad = aperiodic_violation(m)
        if bad is None:
            return True, {"fact": "x^w x = x^w holds in M"}
        return False, {"fact": "x^w x != x^w in M", "counterexample": {"x": data.word(bad)}}
    raise ValueError(f"unknown property {prop!r}")


# -- cross-check routes ------------------------------------------------------


def _shape_entry(a: Automaton, shape: str, form: str) -> dict:
    bad = shape_violation(a, shape)
    entry: dict[str, Any] = {"shape": shape, "automaton": form, "states": a.n, "holds": bad is None}
    if bad is not None:
        entry["witness"] = sorted(bad) if isinstance(bad, frozenset) else bad
    return entry


def path_automaton(d: Automaton) -> Nfa:
    """The trim automaton with every state initial and final: it accepts the factors of L."""
    t = trim(d).to_nfa()
    every = frozenset(range(t.n))
    return Nfa(t.alphabet, t.n, t.transitions, every, every)


def shape_route(data: LanguageData, prop: str) -> tuple[bool, dict] | None:
    """Structural characterization on the canonical automaton it needs, if any."""
    if prop == "right_ideal":
        e = _shape_entry(data.dfa, "flip", "complete minimal DFA")
        return e["holds"], e
    if prop == "left_ideal":
        e = _shape_entry(data.reversed, "flip", "complete minimal DFA of the reversal")
        return e["holds"], e
    if prop == "two_sided_ideal":
        r = _shape_entry(data.dfa, "flip", "complete minimal DFA")
        l = _shape_entry(data.reversed, "flip", "complete minimal DFA of the reversal")
        return r["holds"] and l["holds"], {"right": r, "left": l}
    if prop == "prefix_closed":
        e = _shape_entry(data.trim, "fully_accepting", "trim minimal DFA")
        return e["holds"], e
    if prop == "suffix_closed":
        e = _shape_entry(data.reversed_trim, "fully_accepting", "trim minimal DFA of the reversal")
        return e["holds"], e
    if prop == "factorial":
        r = _shape_entry(data.trim, "fully_accepting", "trim minimal DFA")
        l = _shape_entry(data.reversed_trim, "fully_accepting", "trim minimal DFA of the reversal")
        path = path_automaton(data.dfa)
        same = compare(path, data.dfa)
        entry = {
            "prefix": r,
            "suffix": l,
            "path_automaton": {"shape_holds": check_shape(path, "path"),
                               "equivalent": same.holds,
                               "counterexample": same.counterexample},
        }
        verdict = r["holds"] and l["holds"]
        if verdict != same.holds:
            entry["path_automaton"]["disagrees"] = True
        return verdict, entry
    if prop == "bc_right_ideals":
        e = _shape_entry(data.dfa, "weak", "complete minimal DFA")
        return e["holds"], e
    if prop == "bc_left_ideals":
        e = _shape_entry(data.reversed, "weak", "complete minimal DFA of the reversal")
        return e["holds"], e
    return None


def identity_route(data: LanguageData, prop: str) -> tuple[bool, dict] | None:
    if prop == "aperiodic":
        res = check_identity(data.dfa, APERIODIC)
        name, on_complement = str(APERIODIC), False
    elif prop in _IDENTITY:
        name, on_complement = _IDENTITY[prop]
        res = check_identity(data.complement if on_complement else data.dfa, CATALOG[name])
    else:
        return None
    entry = {"identity": name, "language": "complement" if on_complement else "L",
             "holds": res.holds}
    if not res.holds:
        entry["assignment"] = res.assignment
    return res.holds, entry


# -- bounded oracle ----------------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    """``consistent`` is only evidence; a refutation carries a witness."""

    property: str
    consistent: bool
    witness: Any = None
    max_len: int = DEFAULT_ORACLE_LEN

    def __bool__(self) -> bool:
        return self.consistent

    def to_json(self) -> dict:
        out = {"property": self.property, "consistent": self.consistent, "max_len": self.max_len}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _extension_failure(table, alphabet, max_len, left):
    for u, inside in table.items():
        if not inside or len(u) >= max_len:
            continue
        for a in alphabet:
            w = a + u if left else u + a
            if not table[w]:
                return {"word": u, "extended": w}
    return None


def _removal_failure(table, left):
    for w, inside in table.items():
        if inside and w:
            u = w[1:] if left else w[:-1]
            if not table[u]:
                return {"word": w, "factor": u}
    return None


def brute_force_oracle(a, prop: str, max_len: int = DEFAULT_ORACLE_LEN) -> OracleResult:
    """Check ``prop`` against its definition on all words up to ``max_len``.

    Ideal and closure properties are tested letter by letter in shortlex
    order, which covers longer extensions and factors by induction.  The
    Boolean-combination, DA and aperiodicity oracles probe their identities
    with short words substituted for the variables.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}")
    a = _as_automaton(a)
    if prop in ("bc_right_ideals", "bc_left_ideals", "bc_two_sided_ideals", "in_DA", "aperiodic"):
        ident = APERIODIC if prop == "aperiodic" else CATALOG[_IDENTITY[prop][0]]
        res = check_identity(a, ident, "words", max_n=3, max_image=2)
        witness = None if res.holds else {"identity": str(ident), "assignment": res.assignment,
                                          "n": res.n}
        return OracleResult(prop, res.holds, witness, max_len)
    table = membership_table(a, max_len)
    alphabet = a.alphabet
    checks = {
        "right_ideal": lambda: _extension_failure(table, alphabet, max_len, left=False),
        "left_ideal": lambda: _extension_failure(table, alphabet, max_len, left=True),
        "two_sided_ideal": lambda: (_extension_failure(table, alphabet, max_len, False)
                                    or _extension_failure(table, alphabet, max_len, True)),
        "prefix_closed": lambda: _removal_failure(table, left=False),
        "suffix_closed": lambda: _removal_failure(table, left=True),
        "factorial": lambda: _removal_failure(table, False) or _removal_failure(table, True),
    }
    witness = checks[prop]()
    return OracleResult(prop, witness is None, witness, max_len)


# -- the report --------------------------------------------------------------


@dataclass
class PropertyEntry:
    verdict: bool
    route: str
    evidence: dict

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "route": self.route, "evidence": self.evidence}


@dataclass
class ClassificationReport:
    source: str
    minimal_dfa_states: int
    properties: dict[str, PropertyEntry]
    cross_checks: dict = field(default_factory=dict)

    def __getitem__(self, prop: str) -> bool:
        return self.properties[prop].verdict

    @property
    def verdicts(self) -> dict[str, bool]:
        return {p: e.verdict for p, e in self.properties.items()}

    def to_json(self) -> dict:
        return {
            "language": {"source": self.source, "minimal_dfa_states": self.minimal_dfa_states},
            "properties": {p: e.to_json() for p, e in self.properties.items()},
            "cross_checks": self.cross_checks,
        }


def report_invariant_violations(verdicts: dict[str, bool]) -> list[str]:
    """Implications every correct report satisfies; returns the broken ones."""
    v = verdicts
    rules = [
        ("factorial implies prefix_closed and suffix_closed",
         not v["factorial"] or (v["prefix_closed"] and v["suffix_closed"])),
        ("factorial iff prefix_closed and suffix_closed",
         v["factorial"] == (v["prefix_closed"] and v["suffix_closed"])),
        ("two_sided_ideal implies right_ideal and left_ideal",
         not v["two_sided_ideal"] or (v["right_ideal"] and v["left_ideal"])),
        ("bc_two_sided_ideals iff bc_right_ideals and bc_left_ideals",
         v["bc_two_sided_ideals"] == (v["bc_right_ideals"] and v["bc_left_ideals"])),
        ("right_ideal implies bc_right_ideals", not v["right_ideal"] or v["bc_right_ideals"]),
        ("left_ideal implies bc_left_ideals", not v["left_ideal"] or v["bc_left_ideals"]),
        ("two_sided_ideal implies bc_two_sided_ideals",
         not v["two_sided_ideal"] or v["bc_two_sided_ideals"]),
        ("prefix_closed implies bc_right_ideals", not v["prefix_closed"] or v["bc_right_ideals"]),
        ("suffix_closed implies bc_left_ideals", not v["suffix_closed"] or v["bc_left_ideals"]),
        ("factorial implies bc_two_sided_ideals", not v["factorial"] or v["bc_two_sided_ideals"]),
    ]
    return [name for name, ok in rules if not ok]


def _as_automaton(a, alphabet=None) -> Automaton:
    if isinstance(a, str):
        if alphabet is None:
            raise ValueError("a regular expression needs an explicit alphabet")
        return parse_regex(a, alphabet)
    if isinstance(a, TwoWayAutomaton):
        diags = validate(a)
        if diags:
            raise TwoWayError("invalid two-way automaton: " + diags[0].message, diags)
        return to_one_way_dfa(a)
    if isinstance(a, (Nfa, Dfa)):
        return a
    raise TypeError(f"cannot classify a {type(a).__name__}")


def classify(
    language,
    alphabet=None,
    *,
    oracle_max_len: int = DEFAULT_ORACLE_LEN,
    identities: bool = True,
    source: str | None = None,
) -> ClassificationReport:
    """Classify a regex (with ``alphabet``), a one-way automaton or a two-way automaton."""
    a = _as_automaton(language, alphabet)
    if source is None:
        source = language if isinstance(language, str) else type(language).__name__
    data = LanguageData(a)
    props: dict[str, PropertyEntry] = {}
    agreement: dict[str, dict] = {}
    for prop in PROPERTIES:
        verdict, evidence = monoid_route(data, prop)
        checks: dict[str, Any] = {}
        routes = [("shape", shape_route(data, prop))]
        if identities:
            routes.append(("identity", identity_route(data, prop)))
        for name, got in routes:
            if got is not None:
                checks[name] = {"verdict": got[0], "agrees": got[0] == verdict, "detail": got[1]}
        oracle = brute_force_oracle(data.dfa, prop, oracle_max_len)
        # a refutation is definitive, consistency is only bounded evidence
        checks["oracle"] = {**oracle.to_json(), "agrees": oracle.consistent or not verdict}
        evidence = {**evidence, "cross_checks": checks}
        props[prop] = PropertyEntry(verdict, "monoid", evidence)
        agreement[prop] = all(c["agrees"] for c in checks.values())
    verdicts = {p: e.verdict for p, e in props.items()}
    cross = {
        "all_agree": all(agreement.values()),
        "agreement": agreement,
        "invariant_violations": report_invariant_violations(verdicts),
        "oracle_max_len": oracle_max_len,
        "monoid_size": data.monoid[0].size,
    }
    return ClassificationReport(str(source), data.dfa.n, props, cross)
