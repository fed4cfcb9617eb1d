import random

import pytest
from hypothesis import given, settings

from stratos import gen, laws
from stratos.atoms import THETA, Atom, atom
from stratos.errors import LevelMismatch, ParseError, TheoryNotThetaClosed
from stratos.sigma import subst_set
from stratos.syntax import parse_pred, parse_set
from stratos.terms import TOP, Atm, Elt, empty, full, permute
from stratos.theories import (
    Axiom, Cong, Refl, Sym, Theory, Trans, Tri, check_eq_derivation, conclusion, eqcent_bounded,
    height, herbrand_member, herbrand_sat, parse_theory,
)

from strategies import seeds

P, S = parse_pred, parse_set
a0, a1 = atom("a@0"), atom("a@1")
u, u2 = S("[c@0] elt(atm(c@0), d@1)"), S("[c@0] top")


def test_certificate_examples():
    T = Theory(((u, u2),))
    assert conclusion(T, Refl(u)) == (u, u)
    z = S("[e@1] elt(atm(a@1), e@2)")
    assert conclusion(T, Cong(z, a1, Axiom(0))) == (subst_set(z, a1, u), subst_set(z, a1, u2))
    assert check_eq_derivation(T, Sym(Axiom(0)))
    diag = []
    assert not check_eq_derivation(T, Trans(Axiom(0), Axiom(0)), diag)
    assert "middle" in diag[0]
    assert not check_eq_derivation(T, Axiom(3))
    assert not check_eq_derivation(T, Axiom(0, shift=1))


def test_search_examples():
    x = S("[c@0] elt(atm(c@0), d@1)")
    r = eqcent_bounded(Theory(()), x, x, 0)
    assert r and r.cert == Refl(x)
    T = Theory(((u, u2),))
    z = S("[e@1] elt(atm(a@1), e@2)")
    lhs, rhs = subst_set(z, a1, u), subst_set(z, a1, u2)
    r = eqcent_bounded(T, lhs, rhs, 1)
    assert r and conclusion(T, r.cert) == (lhs, rhs) and height(r.cert) <= 1
    for d in range(6):
        assert not eqcent_bounded(Theory(()), empty(0), full(0), d)
    with pytest.raises(LevelMismatch):
        eqcent_bounded(T, u, full(2), 1)


def test_depth_is_respected():
    T = Theory(((Atm(atom("p@1")), Atm(atom("q@1"))), (Atm(atom("q@1")), Atm(atom("r@1")))))
    assert not eqcent_bounded(T, Atm(atom("p@1")), Atm(atom("r@1")), 0)
    r = eqcent_bounded(T, Atm(atom("p@1")), Atm(atom("r@1")), 1)
    assert r and isinstance(r.cert, Trans)
    r = eqcent_bounded(T, Atm(atom("r@1")), Atm(atom("p@1")), 3)
    assert r and check_eq_derivation(T, r.cert)


def test_herbrand_examples():
    T0 = Theory((), theta_closed=True)
    assert herbrand_member(T0, THETA(a0), Atm(a0), 0)
    x = S("[c@-1] elt(atm(c@-1), d@0)")
    T = Theory(((Atm(a0), x),), theta_closed=True)
    assert herbrand_member(T, THETA(a0), x, 1)
    for d in range(3):
        assert not herbrand_member(T0, THETA(a0), x, d)
    assert herbrand_sat(T0, TOP, 0) is Tri.TRUE
    assert herbrand_sat(T, Elt(x, THETA(a0)), 1) is Tri.TRUE
    assert herbrand_sat(T0, Elt(x, THETA(a0)), 3) is Tri.UNKNOWN
    assert herbrand_sat(T0, Elt(x, THETA(a0)), 3, closed_world=True) is Tri.FALSE


def test_herbrand_needs_theta_closure():
    with pytest.raises(TheoryNotThetaClosed):
        herbrand_member(Theory(()), THETA(a0), Atm(a0), 0)


def test_shifted_axioms_in_theta_closed_theories():
    T = Theory(((Atm(a0), Atm(atom("b@0"))),), theta_closed=True)
    r = eqcent_bounded(T, Atm(atom("a@2")), Atm(atom("b@2")), 0)
    assert r and r.cert == Axiom(0, 2)
    assert not eqcent_bounded(Theory(T.pairs), Atm(atom("a@2")), Atm(atom("b@2")), 2)


def test_parse_theory():
    T = parse_theory("theta-closed\n# note\neq: atm(a@0) == [c@-1] top\n")
    assert T.theta_closed and T.pairs == ((Atm(a0), S("[c@-1] top")),)
    assert parse_theory(str(T)) == T
    with pytest.raises(ParseError):
        parse_theory("pair: atm(a@0) == atm(b@0)")
    with pytest.raises(LevelMismatch):
        parse_theory("eq: atm(a@0) == atm(b@1)")


def _random_theory(rng, theta=False):
    pairs = []
    for _ in range(rng.randint(1, 2)):
        lv = rng.randint(0, 2)
        pairs.append((gen.sized_set(rng, lv, 3), gen.sized_set(rng, lv, 3)))
    return Theory(tuple(pairs), theta)


def _query(rng, T):
    """A query that is often derivable: a context around one side of an axiom."""
    i = rng.randrange(len(T.pairs))
    x, y = T.pair(i)
    if rng.random() < 0.5:
        a = Atom(x.level, gen.N_INDICES + 1)
        z = laws._holed_context(rng, x, a)
        if z is not None:
            return subst_set(z, a, x), subst_set(z, a, y)
    return (y, x) if rng.random() < 0.5 else (x, gen.sized_set(rng, x.level, 3))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_certificates_are_sound_and_search_is_monotone(seed):
    rng = random.Random(seed)
    T = _random_theory(rng)
    x, y = _query(rng, T)
    found = None
    for d in range(3):
        r = eqcent_bounded(T, x, y, d)
        if found is not None:
            assert r, "derivable at a smaller depth but not here"
        if r:
            assert check_eq_derivation(T, r.cert)
            assert conclusion(T, r.cert) == (x, y)
            assert height(r.cert) <= d
            found = found if found is not None else d


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_theta_ambiguity(seed):
    rng = random.Random(seed)
    T = _random_theory(rng, theta=True)
    x, y = _query(rng, T)
    r = bool(eqcent_bounded(T, x, y, 1))
    assert bool(eqcent_bounded(T, permute(THETA, x), permute(THETA, y), 1)) == r


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_freshness_barrier(seed):
    rng = random.Random(seed)
    T = _random_theory(rng)
    lv = rng.randint(0, 2)
    a = Atom(lv, gen.N_INDICES + 2)
    x = gen.sized_set(rng, lv, 4)
    assert not eqcent_bounded(T, Atm(a), x, 2)


def test_comprehension_contexts_are_found():
    # the hole sits under a binder of the context
    T = Theory(((Atm(atom("p@0")), Atm(atom("q@0"))),))
    lhs = S("[c@0] elt(atm(p@0), r@1)")
    rhs = S("[c@0] elt(atm(q@0), r@1)")
    r = eqcent_bounded(T, lhs, rhs, 1)
    assert r and isinstance(r.cert, Cong)
