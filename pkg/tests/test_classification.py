import pytest
from hypothesis import given, settings

from fixtures import ABC, HIERARCHY, acab, last_a_then_b, two_way
from ideallang.automata import Dfa, to_minimal_dfa, trim
from ideallang.classification import (
    PROPERTIES,
    brute_force_oracle,
    classify,
    report_invariant_violations,
)
from ideallang.regex import parse_regex
from ideallang.shapes import check_shape, shape_violation
from ideallang.twoway import TwoWayError
from strategies import dfas


@pytest.mark.parametrize("regex", list(HIERARCHY))
def test_hierarchy_fixtures(regex):
    report = classify(regex, "abc")
    for prop, want in HIERARCHY[regex].items():
        assert report[prop] is want, prop
    assert report.cross_checks["all_agree"]
    assert report.cross_checks["invariant_violations"] == []


def test_two_way_inputs_classify_like_their_languages():
    assert classify(acab()).verdicts == classify("(a|c)*ab(a|b|c)*", "abc").verdicts
    assert classify(last_a_then_b()).verdicts == classify("(a|b|c)*ab(b|c)*", "abc").verdicts


def test_invalid_two_way_input_is_rejected():
    bad = two_way(("x",), (), {("x", "a", "x"), ("x", "a", "x2")}, "x", set())
    with pytest.raises(TwoWayError):
        classify(bad)


def test_regex_needs_an_alphabet():
    with pytest.raises(ValueError):
        classify("ab")


def test_report_json_layout():
    obj = classify("ab(a|b)*", "ab").to_json()
    assert set(obj) == {"language", "properties", "cross_checks"}
    assert set(obj["properties"]) == set(PROPERTIES)
    entry = obj["properties"]["right_ideal"]
    assert entry["verdict"] is True and entry["route"] == "monoid"
    assert set(entry["evidence"]["cross_checks"]) == {"shape", "identity", "oracle"}


def test_false_verdicts_carry_counterexamples():
    report = classify("ab(a|b)*|a", "ab")
    ev = report.properties["right_ideal"].evidence
    assert report["right_ideal"] is False and "counterexample" in ev


def test_shape_examples():
    assert check_shape(to_minimal_dfa(parse_regex("ab(a|b)*", "ab")), "flip")
    prefixes = trim(to_minimal_dfa(parse_regex("%e|a|ab", "ab")))
    assert check_shape(prefixes, "fully_accepting")
    loop = Dfa(("a", "b"), ((0, 0),), 0, frozenset({0}))
    assert check_shape(loop, "path") and classify(loop)["factorial"]
    not_weak = Dfa(("a",), ((1,), (0,)), 0, frozenset({1}))
    assert shape_violation(not_weak, "weak") == frozenset({0, 1})


def test_oracle_examples():
    assert brute_force_oracle(parse_regex("ab(a|b)*", "ab"), "right_ideal", 6).consistent
    res = brute_force_oracle(parse_regex("ab(a|b)*|a", "ab"), "right_ideal", 3)
    assert not res.consistent and res.witness == {"word": "a", "extended": "aa"}
    assert brute_force_oracle(parse_regex("%e", "ab"), "prefix_closed").consistent


def test_oracle_argument_checks():
    a = parse_regex("a", "ab")
    with pytest.raises(ValueError):
        brute_force_oracle(a, "cofinite")
    with pytest.raises(ValueError):
        brute_force_oracle(a, "right_ideal", 0)


def test_invariant_rules_detect_broken_reports():
    good = dict.fromkeys(PROPERTIES, False)
    assert report_invariant_violations(good) == []
    broken = {**good, "two_sided_ideal": True}
    assert "two_sided_ideal implies right_ideal and left_ideal" in report_invariant_violations(broken)


@settings(max_examples=60, deadline=None)
@given(dfas(max_states=4))
def test_reports_are_coherent(d):
    report = classify(d, oracle_max_len=6)
    assert report_invariant_violations(report.verdicts) == []
    assert report.cross_checks["all_agree"], report.cross_checks["agreement"]
    assert report.minimal_dfa_states == to_minimal_dfa(d).n


def test_alphabet_is_taken_from_the_automaton():
    report = classify(parse_regex("a*", ABC))
    assert report["prefix_closed"] and report["suffix_closed"] and report["factorial"]
    assert not report["right_ideal"]
