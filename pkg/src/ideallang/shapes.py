"""Structural automaton shapes: flip, fully accepting, path and weak."""

from __future__ import annotations

from .automata import Automaton, strongly_connected_components

SHAPES = ("flip", "fully_accepting", "path", "weak")


def shape_violation(a: Automaton, shape: str):
    """A witness against ``shape``, or ``None`` if the automaton has it.

    flip: a transition ``(p, x, q)`` from a final to a non-final state.
    fully_accepting / path: a state that is not final (or not initial).
    weak: an SCC containing both final and non-final states.
    """
    if shape == "flip":
        for p, x, q in sorted(a.transitions):
            if p in a.final and q not in a.final:
                return (p, x, q)
        return None
    if shape == "fully_accepting":
        missing = sorted(set(range(a.n)) - a.final)
        return missing[0] if missing else None
    if shape == "path":
        missing = sorted((set(range(a.n)) - a.final) | (set(range(a.n)) - a.initial))
        return missing[0] if missing else None
    if shape == "weak":
        for comp in strongly_connected_components(a):
            if comp & a.final and comp - a.final:
                return comp
        return None
    raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")


def check_shape(a: Automaton, shape: str) -> bool:
    return shape_violation(a, shape) is None
