"""Hand-built automata used across the test modules."""

from __future__ import annotations

from ideallang.automata import LEFT_MARKER as L
from ideallang.automata import RIGHT_MARKER as R
from ideallang.automata import Dfa
from ideallang.twoway import TwoWayAutomaton

ABC = ("a", "b", "c")

# (regex, expected verdicts) for the three hierarchy languages over {a,b,c}
HIERARCHY = {
    "(a|c)*ab(a|b|c)*": {"right_ideal": True, "bc_right_ideals": True, "in_DA": True,
                         "prefix_closed": False},
    "(a|b|c)*ab(b|c)*": {"in_DA": True, "bc_right_ideals": False},
    "(a|b|c)*ab(a|b|c)*": {"two_sided_ideal": True, "in_DA": False, "aperiodic": True},
}


def two_way(xs, ys, transitions, initial, final, alphabet=ABC) -> TwoWayAutomaton:
    return TwoWayAutomaton(tuple(alphabet), tuple(xs), tuple(ys), frozenset(transitions),
                           initial, frozenset(final))


def acab() -> TwoWayAutomaton:
    """Flip one-pass po2dfa for {a,c}* ab {a,b,c}*.

    ``q1`` skips a and c; at the first b it steps back in ``q2`` to check
    that an a precedes it.
    """
    trans = {("q1", "a", "q1"), ("q1", "c", "q1"), ("q1", R, "q1"), ("q1", "b", "q2"),
             ("q2", "a", "d"), ("q2", "b", "fail"), ("q2", "c", "fail"), ("q2", L, "fail")}
    for z in ("d", "fail"):
        trans |= {(z, a, z) for a in (*ABC, R)}
    return two_way(("q1", "d", "fail"), ("q2",), trans, "q1", {"d"})


def last_a_then_b() -> TwoWayAutomaton:
    """po2dfa for {a,b,c}* ab {b,c}*: scan to the end, back to the last a, check the b."""
    trans = {("x1", a, "x1") for a in ABC} | {("x1", R, "y1")}
    trans |= {("y1", "b", "y1"), ("y1", "c", "y1"), ("y1", "a", "x2"), ("y1", L, "fail")}
    trans |= {("x2", "b", "acc"), ("x2", "a", "fail"), ("x2", "c", "fail"), ("x2", R, "fail")}
    for z in ("acc", "fail"):
        trans |= {(z, a, z) for a in (*ABC, R)}
    return two_way(("x1", "x2", "acc", "fail"), ("y1",), trans, "x1", {"acc"})


def oscillator() -> TwoWayAutomaton:
    """After a lead-in a, bounces between positions 1 and 2 while it reads a."""
    trans = {("s", "a", "x"), ("x", "a", "y"), ("y", "a", "x")}
    return two_way(("s", "x"), ("y",), trans, "s", set(), alphabet=("a",))


def ab_star_dfa() -> Dfa:
    """Hand-written complete DFA for ab{a,b}*: start, after-a, accept sink, dead sink."""
    return Dfa(("a", "b"), ((1, 3), (3, 2), (2, 2), (3, 3)), 0, frozenset({2}))


def a_star_dfa() -> Dfa:
    """Complete minimal DFA of a{a,b}*: q0, acc and dead."""
    return Dfa(("a", "b"), ((1, 2), (1, 1), (2, 2)), 0, frozenset({1}), ("q0", "acc", "dead"))


RANKERS = (
    "X_a", "X_b", "X_c", "X_a X_b", "X_b Y_a", "X_a Y_b X_c", "X_c Y_a", "X_a X_a",
    "X_b Y_a X_c", "X_c Y_b Y_a", "X_a X_b Y_c", "X_b Y_b", "X_c Y_c X_c",
)
