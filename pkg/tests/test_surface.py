import random
import re

import pytest
from hypothesis import given, settings

from stratos import gen
from stratos.atoms import THETA, atom
from stratos.errors import NotClosed, NotStratifiable, NotStratified, ParseError
from stratos.sigma import subst_pred
from stratos.surface import (
    Bot, Eq, Forall, Imp, In, SComp, Var, check_stratified, free_vars, infer_stratification, interp,
    interp_term, is_stratified, parse, plus, size, substitute, theta_interp, to_tree,
)
from stratos.terms import BOT, Atm, alpha_eq, permute

from strategies import seeds


def V(name, level):
    return Var(name, level)


def test_parse_examples():
    assert parse("a@2 in b@3") == In(V("a", 2), V("b", 3))
    assert parse("{ a@1 | bot }") == SComp(V("a", 1), Bot())
    with pytest.raises(ParseError):
        parse("a@2 in in")
    phi = parse("forall a@1. (a@1 = a@1 -> bot)")
    assert phi == Forall(V("a", 1), Imp(Eq(V("a", 1), V("a", 1)), Bot()))
    assert parse(str(phi)) == phi


def test_worked_stratification_example():
    for ok in ("a@2 in b@3", "b@3 in c@4", "a@2 = a@2"):
        check_stratified(parse(ok))
    for bad in ("a@2 in c@4", "b@3 in a@2", "a@2 in a@2", "a@2 = b@3"):
        with pytest.raises(NotStratified):
            check_stratified(parse(bad))


def test_tst_flag():
    assert is_stratified(parse("a@0 in b@1"))
    assert not is_stratified(parse("a@0 in b@1"), tst=True)


def test_inference_examples():
    la = infer_stratification(parse("x in y"))
    assert la.levels == {"x": 1, "y": 2}
    with pytest.raises(NotStratifiable) as e:
        infer_stratification(parse("a in a"))
    assert e.value.cycle
    la = infer_stratification(parse("{ a | bot } = b"))
    assert la.levels == {"a": 1, "b": 2}
    check_stratified(la.formula)
    assert infer_stratification(parse("x in y"), anchor=5).levels == {"x": 5, "y": 6}


def test_inference_respects_explicit_levels_and_scope():
    la = infer_stratification(parse("x in y@4"))
    assert la.levels["x"] == 3
    # the bound x and the free x are different variables
    la = infer_stratification(parse("(forall x. x in y) -> y in x"))
    check_stratified(la.formula)
    with pytest.raises(NotStratifiable):
        infer_stratification(parse("x in y -> y in x"))


def test_interp_examples():
    assert interp(Bot()) == BOT
    assert interp_term(V("a", 2)) == Atm(atom("a@2"))
    lhs = interp(parse("s@1 in { a@1 | a@1 in b@2 }"))
    rhs = interp(parse("s@1 in b@2"))
    assert alpha_eq(lhs, rhs)
    with pytest.raises(NotStratified):
        interp(parse("a@1 in a@1"))


def test_plus_examples():
    assert plus(parse("forall a@1. a@1 = a@1")) == parse("forall a@2. a@2 = a@2")
    with pytest.raises(NotClosed):
        plus(parse("a@2 in b@3"))
    phi = parse("forall a@1. forall b@2. a@1 in b@2")
    assert alpha_eq(permute(THETA, interp(phi)), interp(plus(phi)))


def test_size_examples():
    assert size(Bot()) == 1
    assert size(parse("a@2 in b@3")) == 3
    assert size(parse("{ a@1 | bot }")) == 2


def test_substitute_avoids_capture():
    phi = parse("forall b@1. a@1 = b@1")
    out = substitute(phi, V("a", 1), V("b", 1))
    assert V("b", 1) in free_vars(out)


def test_tree_serialisation():
    assert to_tree(parse("a@2 in b@3")) == ["in", ["var", "a", 2], ["var", "b", 3]]
    assert to_tree(atom("a@1")) == ["atom", "a", 1]


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_comprehension_holds(seed):
    rng = random.Random(seed)
    phi = gen.surface_formula(rng, 3)
    if not is_stratified(phi):
        return
    lv = rng.randint(1, 3)
    a = V("z", lv)
    s = gen.surface_term(rng, lv, 1, [])
    if not is_stratified(In(s, SComp(a, phi))):
        return
    lhs = interp(In(s, SComp(a, phi)))
    assert alpha_eq(lhs, interp(substitute(phi, a, s)))
    assert alpha_eq(lhs, subst_pred(interp(phi), a.atom, interp_term(s)))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_typical_ambiguity(seed):
    rng = random.Random(seed)
    phi = gen.closed_surface_formula(rng, 3)
    if is_stratified(phi):
        assert alpha_eq(theta_interp(phi), interp(plus(phi)))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_interpretation_keeps_levels(seed):
    rng = random.Random(seed)
    t = gen.surface_term(rng, rng.randint(1, 4), 3, [])
    if is_stratified(t):
        u = interp_term(t)
        assert u.level == (t.level if isinstance(t, Var) else t.binder.level + 1)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_inference_agrees_with_checking(seed):
    rng = random.Random(seed)
    phi = gen.surface_formula(rng, 3)
    bare = parse(_strip_levels(str(phi)))
    try:
        la = infer_stratification(bare)
    except NotStratifiable:
        assert not is_stratified(phi)
        return
    check_stratified(la.formula)


def _strip_levels(text):
    # a@2 becomes the bare name a2, so distinct atoms stay distinct
    return re.sub(r"([a-z])@(\d+)", r"\1\2", text)
