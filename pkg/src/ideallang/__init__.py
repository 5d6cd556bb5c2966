"""Ideal languages, their Boolean combinations, and the automata that recognize them."""

from .automata import Dfa, Nfa, compare, determinize, equivalent, minimize, to_minimal_dfa
from .classification import ClassificationReport, brute_force_oracle, check_shape, classify
from .identities import CATALOG, check_identity, parse_identity
from .monoid import FiniteMonoid, green_classes, syntactic_monoid, transition_monoid
from .regex import parse_regex
from .twoway import TwoWayAutomaton, compile_ranker, eval_ranker, parse_ranker, simulate

__all__ = [
    "CATALOG",
    "ClassificationReport",
    "Dfa",
    "FiniteMonoid",
    "Nfa",
    "TwoWayAutomaton",
    "brute_force_oracle",
    "check_identity",
    "check_shape",
    "classify",
    "compare",
    "compile_ranker",
    "determinize",
    "equivalent",
    "eval_ranker",
    "green_classes",
    "minimize",
    "parse_identity",
    "parse_ranker",
    "parse_regex",
    "simulate",
    "syntactic_monoid",
    "to_minimal_dfa",
    "transition_monoid",
]
