import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ideallang.automata import AlphabetError, all_words, is_empty
from ideallang.regex import RegexSyntaxError, parse_regex


@pytest.mark.parametrize("regex, inside, outside", [
    ("a|b", ["a", "b"], ["", "ab"]),
    ("ab*", ["a", "abbb"], ["", "b", "aba"]),
    ("(ab)+", ["ab", "abab"], ["", "a", "aba"]),
    ("a?b", ["b", "ab"], ["aab", "a"]),
    (" a  ( b | %e ) ", ["a", "ab"], ["b", "abb"]),
    ("(a|)b", ["b", "ab"], ["a"]),
    ("a%0|b", ["b"], ["a", ""]),
])
def test_small_regexes(regex, inside, outside):
    a = parse_regex(regex, "ab")
    assert all(a.accepts(w) for w in inside)
    assert not any(a.accepts(w) for w in outside)


def test_empty_set_and_star_of_empty_set():
    assert is_empty(parse_regex("%0", "ab"))
    star = parse_regex("%0*", "ab")
    assert star.accepts("") and not star.accepts("a")


@pytest.mark.parametrize("bad", ["(a", "a)", "*a", "%x", "a||*"])
def test_syntax_errors_report_a_position(bad):
    with pytest.raises(RegexSyntaxError) as info:
        parse_regex(bad, "ab")
    assert 0 <= info.value.position <= len(bad)


def test_letters_must_belong_to_the_alphabet():
    with pytest.raises((AlphabetError, RegexSyntaxError)):
        parse_regex("ac", "ab")


def test_glushkov_has_no_more_states_than_positions_plus_one():
    a = parse_regex("(a|b)*abb", "ab")
    assert a.n == 6 and len(a.initial) == 1


def _matches(regex: str, w: str) -> bool:
    return re.fullmatch(regex.replace(" ", ""), w) is not None


@settings(max_examples=200, deadline=None)
@given(st.recursive(
    st.sampled_from(["a", "b"]),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda t: f"{t[0]}{t[1]}"),
        st.tuples(inner, inner).map(lambda t: f"({t[0]}|{t[1]})"),
        inner.map(lambda t: f"({t})*"),
        inner.map(lambda t: f"({t})?"),
    ),
    max_leaves=6,
))
def test_agrees_with_python_re(regex):
    a = parse_regex(regex, "ab")
    for w in all_words("ab", 5):
        assert a.accepts(w) == _matches(regex, w), (regex, w)
