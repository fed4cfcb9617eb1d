"""Seeded random generators of well-formed syntax and prepoints."""

from __future__ import annotations

import random

from .atoms import Atom
from .models import BaseFact, Prepoint
from .sigma import SmallSubst
from .surface import Bot, Eq, Forall, Imp, In, SComp, Var, free_vars
from .terms import All, And, Atm, Comp, Elt, Neg, Pred, SetTerm, empty, full, size

LO, HI = -2, 3
N_INDICES = 4


def atom(rng: random.Random, level: int, indices: int = N_INDICES) -> Atom:
    return Atom(level, rng.randrange(indices))


def set_term(rng: random.Random, level: int, budget: int, lo: int = LO) -> SetTerm:
    """A set at ``level`` with roughly ``budget`` nodes; levels stay at or above ``lo``."""
    if budget <= 1 or level - 1 < lo or rng.random() < 0.35:
        return Atm(atom(rng, level))
    r = rng.random()
    if r < 0.1:
        return empty(level)
    if r < 0.2:
        return full(level)
    return Comp(atom(rng, level - 1), pred(rng, budget - 1, lo))


def pred(rng: random.Random, budget: int, lo: int = LO, hi: int = HI) -> Pred:
    if budget <= 2:
        target = Atom(rng.randint(lo + 1, hi), rng.randrange(N_INDICES))
        if budget <= 1 and rng.random() < 0.3:
            return And(()) if rng.random() < 0.5 else Neg(And(()))
        return Elt(Atm(atom(rng, target.level - 1)), target)
    r = rng.random()
    if r < 0.4:
        target = Atom(rng.randint(lo + 1, hi), rng.randrange(N_INDICES))
        return Elt(set_term(rng, target.level - 1, budget - 1, lo), target)
    if r < 0.55:
        return Neg(pred(rng, budget - 1, lo, hi))
    if r < 0.75:
        k = rng.randint(0, 2)
        if k == 0:
            return And(())
        share = max(1, (budget - 1) // k)
        return And(pred(rng, share, lo, hi) for _ in range(k))
    return All(atom(rng, rng.randint(lo, hi)), pred(rng, budget - 1, lo, hi))


def _sized(make, rng, max_size):
    """Retry ``make(budget)`` until the size lands near a uniformly drawn target."""
    target = rng.randint(1, max_size)
    best = None
    for _ in range(40):
        t = make(target + 1)
        k = size(t)
        if k <= max_size and (best is None or abs(k - target) < abs(size(best) - target)):
            best = t
            if abs(k - target) <= 1:
                break
    return best if best is not None else make(1)


def sized_pred(rng: random.Random, max_size: int = 8, lo: int = LO, hi: int = HI) -> Pred:
    return _sized(lambda b: pred(rng, b, lo, hi), rng, max_size)


def sized_set(rng: random.Random, level: int, max_size: int = 8, lo: int = LO) -> SetTerm:
    return _sized(lambda b: set_term(rng, level, b, lo), rng, max_size)


def term(rng: random.Random, max_size: int = 8):
    """A predicate or a set, for laws stated over both."""
    if rng.random() < 0.7:
        return sized_pred(rng, max_size)
    return sized_set(rng, rng.randint(LO, HI), max_size)


def fresh_set(rng, level, avoid, max_size=8, tries=200) -> SetTerm:
    """A random set at ``level`` none of whose free atoms lie in ``avoid``."""
    for _ in range(tries):
        x = sized_set(rng, level, max_size)
        if not (x.support & set(avoid)):
            return x
    return full(level)


# prepoints --------------------------------------------------------------------

def prepoint(rng: random.Random, facts: int = 5, stack: int = 2, lo: int = LO, hi: int = HI) -> Prepoint:
    base = []
    for _ in range(rng.randint(0, facts)):
        a = Atom(rng.randint(lo + 1, hi), rng.randrange(N_INDICES))
        base.append(BaseFact(a, sized_set(rng, a.level - 1, 4, lo)))
    p = Prepoint.of(base)
    for _ in range(rng.randint(0, stack)):
        a = Atom(rng.randint(lo, hi), rng.randrange(N_INDICES))
        p = p.push(SmallSubst(((a, sized_set(rng, a.level, 4, lo)),)))
    return p


def small_subst(rng: random.Random, entries: int = 3) -> SmallSubst:
    """Up to ``entries`` pairs, each domain atom fresh for every image."""
    for _ in range(200):
        k = rng.randint(1, entries)
        dom = {}
        for _ in range(k):
            a = Atom(rng.randint(LO, HI), rng.randrange(N_INDICES))
            dom[a] = sized_set(rng, a.level, 4)
        imgs = frozenset().union(*(x.support for x in dom.values()))
        if len(dom) == 1 or not (imgs & set(dom)):
            return SmallSubst(tuple(dom.items()))
    return SmallSubst(())


# surface formulas ---------------------------------------------------------------

_NAMES = "abcdefgh"


def surface_term(rng, level: int, depth: int, scope: list):
    if depth <= 0 or level <= 1 or rng.random() < 0.5:
        here = [v for v in scope if v.level == level]
        if here and rng.random() < 0.6:
            return rng.choice(here)
        return Var(rng.choice(_NAMES), level)
    b = Var(rng.choice(_NAMES), level - 1)
    return SComp(b, surface_formula(rng, depth - 1, scope + [b]))


def surface_formula(rng, depth: int = 3, scope=None, lo: int = 1, hi: int = 4):
    scope = scope or []
    r = rng.random()
    if depth <= 0 or r < 0.25:
        lv = rng.randint(lo, hi - 1)
        if rng.random() < 0.7:
            return In(surface_term(rng, lv, depth - 1, scope), surface_term(rng, lv + 1, depth - 1, scope))
        return Eq(surface_term(rng, lv, depth - 1, scope), surface_term(rng, lv, depth - 1, scope))
    if r < 0.35:
        return Bot()
    if r < 0.65:
        return Imp(surface_formula(rng, depth - 1, scope, lo, hi), surface_formula(rng, depth - 1, scope, lo, hi))
    b = Var(rng.choice(_NAMES), rng.randint(lo, hi))
    return Forall(b, surface_formula(rng, depth - 1, scope + [b], lo, hi))


def closed_surface_formula(rng, depth: int = 3):
    phi = surface_formula(rng, depth)
    for v in sorted(free_vars(phi), key=lambda v: (v.level, v.name)):
        phi = Forall(v, phi)
    return phi
