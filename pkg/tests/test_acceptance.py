"""Acceptance criteria 1-7.

Each criterion returns ``(ok, detail)``; results are collected in
``RESULTS`` and printed one line per criterion at the end of the pytest
run (see ``conftest.py``), or directly when this file is run as a script.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from functools import lru_cache

from corpus import minimal_corpus, random_weak_dfa
from fixtures import ABC, RANKERS, acab, last_a_then_b, oscillator
from ideallang.automata import (
    all_words,
    combine,
    complement,
    equivalent,
    is_empty,
    to_minimal_dfa,
    union_all,
)
from ideallang.classification import (
    PROPERTIES,
    LanguageData,
    brute_force_oracle,
    classify,
    identity_route,
    monoid_route,
    shape_route,
)
from ideallang.constructions import (
    bc_decomposition,
    sw_to_nfa,
    to_staiger_wagner,
    weak_to_flip_union,
)
from ideallang.identities import CATALOG, check_identity
from ideallang.monoid import is_ideal_subset, syntactic_monoid
from ideallang.regex import parse_regex
from ideallang.shapes import check_shape
from ideallang.twoway import (
    complement_one_pass,
    compile_ranker,
    complete_two_way,
    convert_flip_fully,
    eval_ranker,
    extract_monomials,
    monomial_check,
    monomials_union,
    parse_ranker,
    simulate,
    to_one_way_dfa,
)

CORPUS_SIZE = 1000
WEAK_SIZE = 200
RESULTS: dict[int, tuple[bool, str]] = {}

_PROPERTY_OF = {
    "right-ideal": "right_ideal",
    "left-ideal": "left_ideal",
    "two-sided-ideal": "two_sided_ideal",
    "bc-right": "bc_right_ideals",
    "bc-left": "bc_left_ideals",
    "bc-two-sided": "bc_two_sided_ideals",
    "da": "in_DA",
}


@lru_cache(maxsize=None)
def corpus():
    return tuple(minimal_corpus(CORPUS_SIZE))


def _record(n: int, ok: bool, detail: str) -> tuple[bool, str]:
    RESULTS[n] = (ok, detail)
    return ok, detail


# -- criteria ----------------------------------------------------------------


def criterion_1():
    expected = {
        "(a|c)*ab(a|b|c)*": {"right_ideal": True, "bc_right_ideals": True, "in_DA": True},
        "(a|b|c)*ab(b|c)*": {"in_DA": True, "bc_right_ideals": False},
        "(a|b|c)*ab(a|b|c)*": {"two_sided_ideal": True, "in_DA": False, "aperiodic": True},
    }
    start = time.perf_counter()
    wrong = []
    for regex, want in expected.items():
        report = classify(regex, "abc")
        wrong += [f"{regex}:{p}" for p, v in want.items() if report[p] is not v]
    elapsed = time.perf_counter() - start
    ok = not wrong and elapsed < 1.0
    return _record(1, ok, f"{len(expected)} fixtures, wrong={wrong}, {elapsed:.2f}s (< 1s)")


def criterion_2():
    start = time.perf_counter()
    dfas = corpus()
    pairs = 0
    disagreements = []
    for i, d in enumerate(dfas):
        data = LanguageData(d)
        for prop in ("right_ideal", "prefix_closed", "bc_right_ideals"):
            verdict, _ = monoid_route(data, prop)
            shape, _ = shape_route(data, prop)
            ident, _ = identity_route(data, prop)
            pairs += 1
            if not verdict == shape == ident:
                disagreements.append((i, prop, verdict, shape, ident))
    elapsed = time.perf_counter() - start
    ok = len(dfas) >= 1000 and not disagreements and elapsed < 60
    sizes = sorted({d.n for d in dfas})
    return _record(2, ok, f"{len(dfas)} minimal DFAs (states {sizes[0]}..{sizes[-1]}), "
                          f"{pairs} route triples, {len(disagreements)} disagreements, "
                          f"{elapsed:.1f}s (< 60s)")


def _right_ideal(d) -> bool:
    m, acc, _ = syntactic_monoid(d)
    return is_ideal_subset(m, acc, "right")


def criterion_3():
    rng = random.Random(7)
    start = time.perf_counter()
    failures = []
    for i in range(WEAK_SIZE):
        d = random_weak_dfa(rng)
        if not equivalent(sw_to_nfa(to_staiger_wagner(d)), d):
            failures.append((i, "staiger-wagner"))
        u = weak_to_flip_union(d)
        if not all(check_shape(p, "flip") for p in u.parts):
            failures.append((i, "flip parts"))
        if any(not is_empty(combine(x, y, "intersection"))
               for x, y in itertools.combinations(u.parts, 2)):
            failures.append((i, "disjoint parts"))
        if not equivalent(u.union(), d):
            failures.append((i, "flip union"))
        pairs = bc_decomposition(d)
        rebuilt = union_all(d.alphabet, [combine(p.upper, p.strict, "difference") for p in pairs])
        if not equivalent(rebuilt, d):
            failures.append((i, "bc union"))
        if not all(_right_ideal(p.upper) and _right_ideal(p.strict) for p in pairs):
            failures.append((i, "bc parts"))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    return _record(3, ok, f"{WEAK_SIZE} weak DFAs, failures={failures[:5]}, {elapsed:.1f}s (< 60s)")


def criterion_4():
    start = time.perf_counter()
    refuted = []
    checks = 0
    for i, d in enumerate(corpus()):
        data = LanguageData(d)
        verdicts = {p: monoid_route(data, p)[0] for p in PROPERTIES}
        for prop, v in verdicts.items():
            if v:
                checks += 1
                if not brute_force_oracle(d, prop, 8).consistent:
                    refuted.append((i, prop))
        for name, ident in CATALOG.items():
            if verdicts[_PROPERTY_OF[name]]:
                checks += 1
                if not check_identity(d, ident, "words", max_n=3, max_image=2).holds:
                    refuted.append((i, name))
    elapsed = time.perf_counter() - start
    return _record(4, not refuted, f"{checks} affirmed verdicts probed on the criterion 2 corpus, "
                                   f"{len(refuted)} refuted {refuted[:5]}, {elapsed:.1f}s")


def _two_way_fixtures():
    out = {"acab": acab(), "last-a-then-b": last_a_then_b(), "oscillator": oscillator()}
    for r in RANKERS:
        out[f"ranker {r}"] = compile_ranker(parse_ranker(r), ABC)
    one_pass = [(k, t) for k, t in out.items() if k.startswith("ranker") or k == "acab"]
    for k, t in one_pass:
        out[f"complement {k}"] = complement_one_pass(t)
        fully = convert_flip_fully(complete_two_way(t), "flip_to_fully")
        out[f"fully {k}"] = fully
        out[f"flip {k}"] = convert_flip_fully(fully, "fully_to_flip")
    return out, one_pass


def criterion_5():
    start = time.perf_counter()
    fixtures, one_pass = _two_way_fixtures()
    mismatches = []
    words = {}
    for name, t in fixtures.items():
        d = to_one_way_dfa(t)
        ws = words.setdefault(t.alphabet, list(all_words(t.alphabet, 8)))
        bad = next((w for w in ws if simulate(t, w).accepted != d.accepts(w)), None)
        if bad is not None:
            mismatches.append((name, bad))
    not_complement = []
    for k, t in one_pass:
        lang = to_minimal_dfa(to_one_way_dfa(t))
        comp = complement(lang)
        for kind in ("complement", "fully"):
            if not equivalent(to_one_way_dfa(fixtures[f"{kind} {k}"]), comp):
                not_complement.append(f"{kind} {k}")
        if not equivalent(to_one_way_dfa(fixtures[f"flip {k}"]), lang):
            not_complement.append(f"flip {k}")
    elapsed = time.perf_counter() - start
    ok = not mismatches and not not_complement and elapsed < 120
    return _record(5, ok, f"{len(fixtures)} po2dfa fixtures exhaustive to length 8, "
                          f"mismatches={mismatches}, non-complements={not_complement}, "
                          f"{elapsed:.1f}s (< 120s)")


def criterion_6():
    r = parse_ranker("X_a Y_b X_c")
    values = (eval_ranker(r, "bac"), eval_ranker(r, "cba"))
    incoherent = []
    for text in RANKERS:
        rk = parse_ranker(text)
        t = compile_ranker(rk, ABC)
        for w in all_words(ABC, 7):
            if simulate(t, w).accepted != (eval_ranker(rk, w) is not None):
                incoherent.append((text, w))
                break
    ok = values == (3, None) and len(RANKERS) >= 10 and not incoherent
    return _record(6, ok, f"X_a Y_b X_c: bac -> {values[0]}, cba -> {values[1]}; "
                          f"{len(RANKERS)} rankers exhaustive to length 7, incoherent={incoherent}")


def criterion_7():
    start = time.perf_counter()
    t = acab()
    ms = extract_monomials(t)
    unambiguous = all(monomial_check(m, "unambiguous") for m in ms)
    exact = equivalent(monomials_union(ms, ABC), to_one_way_dfa(t))
    target = equivalent(to_one_way_dfa(t), parse_regex("(a|c)*ab(a|b|c)*", "abc"))
    elapsed = time.perf_counter() - start
    ok = unambiguous and exact and target and elapsed < 30
    return _record(7, ok, f"{len(ms)} monomials, unambiguous={unambiguous}, exact={exact}, "
                          f"{elapsed:.2f}s (< 30s)")


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7}


def format_result(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"


# -- pytest entry points -----------------------------------------------------


def test_criterion_1_hierarchy_fixtures():
    ok, detail = criterion_1()
    assert ok, detail


def test_criterion_2_route_agreement():
    ok, detail = criterion_2()
    assert ok, detail


def test_criterion_3_construction_exactness():
    ok, detail = criterion_3()
    assert ok, detail


def test_criterion_4_oracle_soundness():
    ok, detail = criterion_4()
    assert ok, detail


def test_criterion_5_two_way_coherence():
    ok, detail = criterion_5()
    assert ok, detail


def test_criterion_6_rankers():
    ok, detail = criterion_6()
    assert ok, detail


def test_criterion_7_monomial_extraction():
    ok, detail = criterion_7()
    assert ok, detail


if __name__ == "__main__":
    for n, run in CRITERIA.items():
        run()
        print(format_result(n), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
