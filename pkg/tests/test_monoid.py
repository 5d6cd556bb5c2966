import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from fixtures import ab_star_dfa
from ideallang.automata import complete, to_minimal_dfa
from ideallang.monoid import (
    FiniteMonoid,
    MonoidTooLarge,
    aperiodic_violation,
    check_associative,
    class_violation,
    cyclic_group,
    da_violation,
    exponent,
    green_classes,
    ideal_violation,
    index_and_period,
    is_aperiodic,
    is_ideal_subset,
    is_in_DA,
    is_union_of_classes,
    omega_power,
    preimage_dfa,
    syntactic_monoid,
    to_json,
    transition_monoid,
)
from ideallang.regex import parse_regex
from ideallang.shapes import check_shape
from strategies import dfas


def closure_size(d) -> int:
    """Transformations generated by the letters, closed by plain Python BFS."""
    gens = [tuple(d.delta[q][i] for q in d.states) for i in range(len(d.alphabet))]
    seen = {tuple(d.states)}
    todo = list(seen)
    while todo:
        f = todo.pop()
        for g in gens:
            h = tuple(g[f[q]] for q in d.states)
            if h not in seen:
                seen.add(h)
                todo.append(h)
    return len(seen)


def syn(regex, alphabet="ab"):
    return syntactic_monoid(parse_regex(regex, alphabet))


def test_universal_language_has_trivial_monoid():
    m, acc, _ = syn("(a|b)*")
    assert m.size == 1 and acc == {m.identity}


def test_even_as_give_the_two_element_group():
    m, acc, _ = syn("(aa)*", "a")
    assert m.size == 2 and acc == {m.identity}
    g = green_classes(m)
    assert len(set(g.r_class)) == 1 and len(set(g.j_class)) == 1
    assert not is_aperiodic(m)


def test_ab_star_monoid_size_and_right_ideal():
    d = ab_star_dfa()
    m, acc = transition_monoid(d)
    assert m.size == closure_size(d)
    assert is_ideal_subset(m, acc, "right")
    assert not is_ideal_subset(m, acc, "left")
    assert is_aperiodic(m)


def test_omega_examples():
    m, _, _ = syn("ab(a|b)*")
    idem = [x for x in m.elements if m.mul(x, x) == x]
    assert all(omega_power(m, e) == e for e in idem)
    z3 = cyclic_group(3)
    assert omega_power(z3, z3.generators["a"]) == z3.identity
    fin, _, _ = syn("ab")
    zero = next(x for x in fin.elements
                if all(fin.mul(x, y) == x == fin.mul(y, x) for y in fin.elements))
    assert omega_power(fin, zero) == zero


def test_index_period_and_exponent_of_cyclic_groups():
    for k in range(1, 7):
        g = cyclic_group(k)
        x = g.generators["a"]
        assert index_and_period(g, x) == (1, k)
        assert exponent(g) % k == 0
        gr = green_classes(g)
        assert len(set(gr.r_class)) == len(set(gr.l_class)) == len(set(gr.j_class)) == 1


def test_da_examples():
    assert is_in_DA(cyclic_group(1))
    assert is_in_DA(syn("(a|c)*ab(a|b|c)*", "abc")[0])
    m, _, _ = syn("(a|b|c)*ab(a|b|c)*", "abc")
    assert not is_in_DA(m)
    x, y = da_violation(m)
    e = omega_power(m, m.mul(x, y))
    assert m.mul(m.mul(e, x), e) != e


def test_ideal_examples():
    m, acc, _ = syn("ab(a|b)*")
    for kind in ("right", "left", "two_sided"):
        assert is_ideal_subset(m, [], kind) and is_ideal_subset(m, m.elements, kind)
    m2, acc2, _ = syn("ab(a|b)*|a")
    assert not is_ideal_subset(m2, acc2, "right")
    x, s, prod = ideal_violation(m2, acc2, "right")
    assert x in acc2 and prod not in acc2 and m2.mul(x, s) == prod


def test_union_of_classes_examples():
    m, acc, _ = syn("b*a")
    assert is_union_of_classes(m, acc, "R")
    m, acc, _ = syn("(a|b|c)*ab(b|c)*", "abc")
    assert not is_union_of_classes(m, acc, "R")
    inside, outside = class_violation(m, acc, "R")
    g = green_classes(m)
    assert g.r_class[inside] == g.r_class[outside]
    assert inside in acc and outside not in acc
    assert is_union_of_classes(m, m.elements, "J")


def test_monoid_size_limit():
    d = to_minimal_dfa(parse_regex("(a|b)*a(a|b)(a|b)(a|b)", "ab"))
    with pytest.raises(MonoidTooLarge):
        transition_monoid(d, max_size=4)


def test_from_table_checks_laws():
    with pytest.raises(ValueError):
        FiniteMonoid.from_table([[0, 1], [1, 1]], 1, {"a": 0})
    with pytest.raises(ValueError):
        FiniteMonoid.from_table([[0, 1, 2], [1, 2, 0], [2, 1, 0]], 0, {"a": 1})


def test_json_dump_is_stable():
    m, acc, _ = syn("ab(a|b)*")
    obj = to_json(m, acc, green_classes(m))
    assert obj == to_json(*syn("ab(a|b)*")[:2], green_classes(m))
    assert obj["size"] == m.size and len(obj["table"]) == m.size ** 2
    assert obj["representatives"][obj["identity"]] == ""


def test_preimage_dfa_recognizes_the_subset():
    m, acc, minimal = syn("ab(a|b)*")
    d = preimage_dfa(m, acc)
    for w in ("", "a", "ab", "aba", "ba", "abba"):
        assert d.accepts(w) == minimal.accepts(w)


# -- properties ------------------------------------------------------------


def brute_r_leq(m, x, y):
    return any(m.mul(y, s) == x for s in m.elements)


def brute_l_leq(m, x, y):
    return any(m.mul(s, y) == x for s in m.elements)


@settings(max_examples=80, deadline=None)
@given(dfas(max_states=4))
def test_transition_monoid_laws(d):
    d = complete(d)
    m, acc = transition_monoid(d)
    assert check_associative(m.table)
    assert m.size == closure_size(d)
    for x, w in enumerate(m.representatives):
        assert m.evaluate(w) == x
    words = sorted(m.representatives, key=lambda w: (len(w), w))
    assert list(m.representatives) == words
    assert acc == {x for x in m.elements if d.run(m.representatives[x]) in d.final}


@settings(max_examples=60, deadline=None)
@given(dfas(max_states=4))
def test_green_orders_match_definitions(d):
    m, _, _ = syntactic_monoid(d)
    g = green_classes(m)
    for x, y in itertools.product(m.elements, repeat=2):
        assert g.r_leq(x, y) == brute_r_leq(m, x, y)
        assert g.l_leq(x, y) == brute_l_leq(m, x, y)
        assert (g.r_class[x] == g.r_class[y]) == (brute_r_leq(m, x, y) and brute_r_leq(m, y, x))
    omega = np.asarray(m.omega)
    assert all(m.mul(e, e) == e for e in omega.tolist())


@settings(max_examples=120, deadline=None)
@given(dfas(max_states=5))
def test_monoid_routes_match_shapes(d):
    m, acc, minimal = syntactic_monoid(d)
    assert is_union_of_classes(m, acc, "R") == check_shape(minimal, "weak")
    assert is_ideal_subset(m, acc, "right") == check_shape(minimal, "flip")
    assert is_union_of_classes(m, acc, "J") == (
        is_union_of_classes(m, acc, "R") and is_union_of_classes(m, acc, "L"))
    assert is_aperiodic(m) == (aperiodic_violation(m) is None)


def test_orders_are_reflexive_on_the_hierarchy_monoid():
    m, _, _ = syn("(a|b|c)*ab(b|c)*", "abc")
    g = green_classes(m)
    assert all(g.r_leq(x, x) and g.l_leq(x, x) and g.j_leq(x, x) for x in m.elements)
    assert all(g.j_leq(x, m.identity) for x in m.elements)
