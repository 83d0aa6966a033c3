import pytest
from hypothesis import given, strategies as st

from delayed_sup.terms import (
    BOOL, IOTA, App, PositionError, Sort, SortError, Symbol, Var, apply, at_or_below_var, compose,
    depth, max_var_id, nonvar_positions, occurs, positions, replace_at, shift_vars, subterm_at,
    variables,
)

f = Symbol.untyped("f", 2)
g = Symbol.untyped("g", 1)
a = App(Symbol.untyped("a", 0))
b = App(Symbol.untyped("b", 0))
x, y, z = Var(0), Var(1), Var(2)


def test_structural_equality_and_hash():
    assert f(a, g(x)) == f(a, g(Var(0)))
    assert hash(f(a, g(x))) == hash(f(a, g(Var(0))))
    assert f(a, b) != f(b, a)
    assert x != Var(0, BOOL)


def test_symbol_identity_includes_sort():
    p_bool = Symbol.untyped("p", 1, BOOL)
    p_iota = Symbol.untyped("p", 1, IOTA)
    assert p_bool != p_iota


def test_arity_and_sort_checks():
    with pytest.raises(SortError):
        App(f, (a,))
    s = Sort("s")
    h = Symbol("h", (s,), IOTA)
    with pytest.raises(SortError):
        h(a)


def test_size_ground_depth():
    t = f(g(a), x)
    assert t.size == 4
    assert not t.ground and f(a, b).ground
    assert depth(t) == 2 and depth(a) == 0 and depth(x) == 0


def test_positions_preorder():
    t = f(g(a), x)
    assert [p for p, _ in positions(t)] == [(), (1,), (1, 1), (2,)]
    assert [p for p, _ in nonvar_positions(t)] == [(), (1,), (1, 1)]


def test_subterm_and_replace():
    t = f(g(a), x)
    assert subterm_at(t, (1, 1)) == a
    assert replace_at(t, (1, 1), b) == f(g(b), x)
    assert replace_at(t, (), b) == b
    with pytest.raises(PositionError):
        subterm_at(t, (3,))
    with pytest.raises(PositionError):
        subterm_at(t, (2, 1))


def test_replace_checks_sort():
    p = Symbol.untyped("p", 0, BOOL)
    with pytest.raises(SortError):
        replace_at(f(a, b), (1,), App(p))


def test_at_or_below_var():
    t = f(g(a), x)
    assert at_or_below_var(t, (2,))
    assert not at_or_below_var(t, (1, 1))
    assert not at_or_below_var(t, ())


def test_apply_is_simultaneous():
    sigma = {x: y, y: a}
    assert apply(sigma, f(x, y)) == f(y, a)


def test_compose_order():
    sigma = {x: g(y)}
    rho = {y: a, x: b}
    c = compose(sigma, rho)
    for t in (x, y, z, f(x, y)):
        assert apply(c, t) == apply(rho, apply(sigma, t))
    assert c == {x: g(a), y: a}


def test_compose_drops_identity_bindings():
    assert compose({x: y}, {y: x}) == {y: x}


def test_occurs_variables_shift():
    t = f(x, g(z))
    assert occurs(x, t) and not occurs(y, t)
    assert variables(t) == {0, 2}
    assert shift_vars(t, 3) == f(Var(3), g(Var(5)))
    assert max_var_id(t) == 2 and max_var_id(a) == -1


terms = st.recursive(
    st.sampled_from([a, b, x, y]),
    lambda kids: st.one_of(st.builds(lambda s: g(s), kids), st.builds(lambda s, t: f(s, t), kids, kids)),
    max_leaves=8,
)


@given(terms, st.dictionaries(st.sampled_from([x, y, z]), terms, max_size=3),
       st.dictionaries(st.sampled_from([x, y, z]), terms, max_size=3))
def test_compose_law(t, s1, s2):
    assert apply(compose(s1, s2), t) == apply(s2, apply(s1, t))


@given(terms)
def test_replace_subterm_roundtrip(t):
    for p, u in positions(t):
        assert replace_at(t, p, u) == t
        assert subterm_at(replace_at(t, p, b), p) == b


def test_small_substitution_examples():
    h = f
    assert apply({x: a, y: g(a)}, h(x, y)) == f(a, g(a))
    assert compose({x: y}, {y: a}) == {x: a, y: a}
    assert compose({x: a}, {x: b}) == {x: a}
    assert variables(f(x, f(y, x))) == {0, 1}
