import pytest
from hypothesis import given

from stratos.atoms import (
    IDENTITY, THETA, Atom, apply, atom, compose, fresh, fresh_many, invert, power, swap, theta_power,
)
from stratos.errors import LevelMismatch, ParseError

from strategies import atoms, finite_perms, perms

a1, b1 = atom("a@1"), atom("b@1")


def test_names_round_trip():
    assert atom("b3@0") == Atom(0, 79)
    assert str(Atom(0, 79)) == "b3@0"
    assert atom("a@-2") == Atom(-2, 0)
    for k in range(200):
        assert atom(str(Atom(1, k))) == Atom(1, k)


@pytest.mark.parametrize("bad", ["a", "A@1", "a@x", "@1", "ab@1"])
def test_bad_names(bad):
    with pytest.raises(ParseError):
        atom(bad)


def test_apply_examples():
    assert apply(IDENTITY, a1) == a1
    assert apply(swap(a1, b1), a1) == b1
    assert apply(THETA, Atom(0, 7)) == Atom(1, 7)


def test_compose_invert_power_examples():
    p = swap(a1, b1)
    assert compose(p, IDENTITY) == p
    assert compose(p, p) == IDENTITY
    assert invert(IDENTITY) == IDENTITY
    assert invert(p) == p
    assert power(THETA, 0) == IDENTITY
    assert power(p, 2) == IDENTITY
    assert power(THETA, 3) == theta_power(3)


def test_swap_across_levels_rejected():
    with pytest.raises(LevelMismatch):
        swap(a1, atom("a@2"))


def test_fresh_examples():
    assert fresh(0) == Atom(0, 0)
    assert fresh(0, {Atom(0, 0), Atom(0, 1)}) == Atom(0, 2)
    assert fresh(2, {Atom(0, 0)}) == Atom(2, 0)
    xs = fresh_many(1, 3, {a1})
    assert len(set(xs)) == 3 and a1 not in xs


@given(perms, perms, perms, atoms)
def test_group_laws(p, q, r, a):
    assert apply(compose(p, compose(q, r)), a) == apply(compose(compose(p, q), r), a)
    assert compose(compose(p, q), r) == compose(p, compose(q, r))
    assert compose(p, invert(p)) == IDENTITY == compose(invert(p), p)
    assert apply(compose(p, q), a) == apply(p, apply(q, a))


@given(perms, atoms)
def test_levels_shift_uniformly(p, a):
    assert apply(p, a).level == a.level + p.shift


@given(finite_perms, atoms)
def test_power_matches_iteration(p, a):
    b = a
    for _ in range(3):
        b = apply(p, b)
    assert apply(power(p, 3), a) == b
    assert apply(power(p, -1), b) == apply(power(p, 2), a)
