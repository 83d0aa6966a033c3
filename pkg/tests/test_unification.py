import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from delayed_sup.terms import IOTA, App, Symbol, SortError, Var, BOOL, apply, compose, var_set
from delayed_sup.unification import UnificationFailure, match_term, mgu, mgu_pairs, unify

from gen import UNIF_SIG, random_ground, random_term, unification_pair

f = Symbol.untyped("f", 2)
g = Symbol.untyped("g", 1)
a = App(Symbol.untyped("a", 0))
b = App(Symbol.untyped("b", 0))
x, y, z = Var(0), Var(1), Var(2)


def test_simple_unifier():
    sigma = mgu(f(x, g(y)), f(a, g(b)))
    assert sigma == {x: a, y: b}


def test_clash_and_occurs():
    with pytest.raises(UnificationFailure) as e:
        mgu(f(x, a), f(y, b))
    assert e.value.reason == "clash"
    with pytest.raises(UnificationFailure) as e:
        mgu(x, g(x))
    assert e.value.reason == "occurs"
    assert unify(x, g(x)) is None


def test_chain_is_resolved_fully():
    sigma = mgu(f(x, y), f(y, g(z)))
    assert apply(sigma, f(x, y)) == apply(sigma, f(y, g(z)))
    assert apply(sigma, x) == g(z)


def test_sort_mismatch_raises():
    p = App(Symbol.untyped("p", 0, BOOL))
    with pytest.raises(SortError):
        mgu(a, p)


def test_simultaneous_pairs():
    sigma = mgu_pairs([(x, g(y)), (y, a)])
    assert apply(sigma, x) == g(a)
    with pytest.raises(UnificationFailure):
        mgu_pairs([(x, a), (x, b)])


def test_match_is_one_sided():
    assert match_term(f(x, x), f(a, a)) == {x: a}
    assert match_term(f(x, x), f(a, b)) is None
    assert match_term(a, x) is None
    assert match_term(f(x, y), f(y, a)) == {x: y, y: a}


def _ground_unifiers_exist(s, t, universe):
    vs = sorted(var_set(s) | var_set(t), key=lambda v: v.id)
    for combo in itertools.product(universe, repeat=len(vs)):
        th = dict(zip(vs, combo))
        if apply(th, s) == apply(th, t):
            return True
    return False


def test_against_brute_force_ground_search():
    # a ground unifier in a finite universe implies an mgu exists;
    # an mgu implies every ground instance of it is a unifier
    rng = random.Random(11)
    small = [random_ground(rng, UNIF_SIG, d) for d in (0, 0, 1, 1, 2)]
    universe = list(dict.fromkeys(small + [a, b]))
    for _ in range(150):
        s = random_term(rng, UNIF_SIG, [x, y], 2)
        t = random_term(rng, UNIF_SIG, [x, y], 2)
        sigma = unify(s, t)
        if _ground_unifiers_exist(s, t, universe):
            assert sigma is not None, (s, t)
        if sigma is not None:
            assert apply(sigma, s) == apply(sigma, t)


def test_generated_pairs_properties():
    rng = random.Random(5)
    for _ in range(300):
        s, t = unification_pair(rng)
        sigma = unify(s, t)
        if sigma is None:
            continue
        assert apply(sigma, s) == apply(sigma, t)
        # idempotent
        assert compose(sigma, sigma) == sigma
        # most general: any ground unifier factors through sigma
        vs = var_set(s) | var_set(t)
        theta = {v: random_ground(rng, UNIF_SIG, 1) for v in vs}
        instance = {v: apply(theta, apply(sigma, v)) for v in vs}
        assert apply(instance, s) == apply(instance, t)
        rest = {v: apply(instance, v) for v in vs}
        assert all(apply(rest, apply(sigma, v)) == apply(rest, v) for v in vs)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_unifier_of_instance_pair(seed):
    rng = random.Random(seed)
    s = random_term(rng, UNIF_SIG, [x, y, z], 3)
    theta = {v: random_ground(rng, UNIF_SIG, 2) for v in (x, y, z)}
    ground = apply(theta, s)
    sigma = unify(s, ground)
    assert sigma is not None
    assert apply(sigma, s) == ground
