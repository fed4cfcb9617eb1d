import random

import pytest
from hypothesis import given, settings

from stratos import gen, laws
from stratos.atoms import Atom, THETA, atom, swap
from stratos.errors import FreshnessViolation, FuelExhausted, LevelMismatch
from stratos.sigma import SmallSubst, apply_small_subst, subst, subst_pred, subst_set, theta_subst
from stratos.syntax import parse_pred, parse_set
from stratos.terms import TOP, Atm, alpha_eq, full, measures, permute, support

from strategies import seeds

P, S = parse_pred, parse_set
a1, b0, n1 = atom("a@1"), atom("b@0"), atom("n@1")


def test_subst_pred_examples():
    X = P("elt(atm(b@0), a@1)")
    assert subst_pred(X, a1, Atm(n1)) == P("elt(atm(b@0), n@1)")
    assert subst_pred(X, a1, full(1)) == TOP
    assert subst_pred(X, a1, Atm(a1)) == X


def test_subst_set_examples():
    assert subst_set(Atm(a1), a1, full(1)) == full(1)
    assert subst_set(Atm(atom("b@2")), a1, full(1)) == Atm(atom("b@2"))
    z = S("[c@0] elt(atm(c@0), a@1)")
    assert subst_set(z, a1, Atm(n1)) == S("[c@0] elt(atm(c@0), n@1)")


def test_capture_is_avoided():
    # the bound c@0 must be renamed away from the free c@0 of the image
    z = S("[c@0] elt(atm(c@0), a@1)")
    x = S("[d@0] elt(atm(c@0), e@1)")
    out = subst_set(z, a1, x)
    assert atom("c@0") in support(out)
    assert alpha_eq(out, S("[q@0] elt(atm(c@0), e@1)"))


def test_level_mismatch():
    with pytest.raises(LevelMismatch):
        subst_pred(P("elt(atm(b@0), a@1)"), a1, full(2))


def test_small_subst_examples():
    X = P("elt(atm(b@0), a@1)")
    assert apply_small_subst(X, SmallSubst()) == X
    assert apply_small_subst(X, SmallSubst.of({a1: Atm(n1)})) == subst_pred(X, a1, Atm(n1))
    with pytest.raises(FreshnessViolation):
        SmallSubst.of({a1: Atm(atom("c@1")), atom("c@1"): Atm(n1)})


def test_theta_subst_examples():
    s = theta_subst(a1, full(1))
    assert apply_small_subst(P("elt(atm(b@0), a@1)"), s) == TOP
    a2 = THETA(a1)
    assert apply_small_subst(P("elt(atm(b@1), a@2)"), s) == TOP
    # the j = 1 instance is the shifted seed
    X = P("elt(atm(b@1), a@2)")
    y = S("[c@0] elt(atm(c@0), d@1)")
    assert apply_small_subst(X, theta_subst(a1, y)) == subst_pred(X, a2, permute(THETA, y))
    with pytest.raises(FreshnessViolation):
        theta_subst(a1, Atm(a1))
    with pytest.raises(FreshnessViolation):
        theta_subst(a1, S("[c@0] elt(atm(a@0), d@1)"))


def test_fuel_guard(monkeypatch):
    monkeypatch.setenv("STRATOS_FUEL", "3")
    with pytest.raises(FuelExhausted):
        subst_pred(P("and{elt(atm(b@0), a@1); neg elt(atm(c@0), a@1); all [d@0] elt(atm(d@0), a@1)}"),
                   a1, full(1))


@pytest.mark.parametrize("seed", range(3))
def test_sigma_laws_hold(seed):
    for r in laws.sigma_suite(200, seed):
        assert r.ok, (r.name, r.counterexample)


def test_dropping_a_side_condition_breaks_the_swap_law():
    # without a # y and b # x the two orders disagree somewhere
    rng = random.Random(1)
    bad = 0
    for _ in range(400):
        Z = gen.term(rng)
        a = laws._pick_atom(rng, Z)
        b = laws._pick_atom(rng, Z, avoid={a})
        x, y = gen.sized_set(rng, a.level, 4), gen.sized_set(rng, b.level, 4)
        bad += subst(subst(Z, a, x), b, y) != subst(subst(Z, b, y), a, x)
    assert bad > 0


@settings(max_examples=200)
@given(seeds)
def test_well_definedness_bounds(seed):
    rng = random.Random(seed)
    Z = gen.term(rng)
    a = laws._pick_atom(rng, Z)
    x = gen.sized_set(rng, a.level, 4)
    out = subst(Z, a, x)
    assert support(out) <= (support(Z) - {a}) | support(x)
    assert measures(out)[1] >= min(measures(Z)[1], measures(x)[1])


@settings(max_examples=200)
@given(seeds)
def test_sigma_is_equivariant(seed):
    rng = random.Random(seed)
    Z = gen.term(rng)
    a = laws._pick_atom(rng, Z)
    x = gen.sized_set(rng, a.level, 4)
    c = laws._pick_atom(rng, Z, a.level, avoid={a})
    for p in (THETA, swap(a, c)):
        assert subst(permute(p, Z), p(a), permute(p, x)) == permute(p, subst(Z, a, x))


@settings(max_examples=100)
@given(seeds)
def test_multi_subst_is_order_independent(seed):
    rng = random.Random(seed)
    s = gen.small_subst(rng)
    Z = gen.term(rng)
    out = Z
    for a, x in reversed(s.entries):
        out = subst(out, a, x)
    assert apply_small_subst(Z, s) == out


def test_singleton_subst_needs_no_freshness():
    s = SmallSubst.of({a1: S("[c@0] elt(atm(c@0), a@1)")})
    assert isinstance(s, SmallSubst)
    assert Atom(1, 0) in s.domain()
