"""Derived forms: membership in a set, extensional equality, set algebra."""

from __future__ import annotations

from typing import Iterable

from .atoms import Atom, fresh
from .errors import LevelMismatch, NotAComprehension
from .sigma import subst_pred
from .terms import All, And, Atm, Comp, Elt, Neg, Pred, SetTerm, concrete, iff


def tin(y: SetTerm, x: SetTerm | Atom) -> Pred:
    """``y`` is an element of ``x``; comprehensions are instantiated at ``y``."""
    if isinstance(x, Atom):
        x = Atm(x)
    if x.level != y.level + 1:
        raise LevelMismatch(f"{y} (level {y.level}) cannot be an element of {x} (level {x.level})")
    if isinstance(x, Atm):
        return Elt(y, x.atom)
    b = fresh(x.level - 1, x.support | y.support)
    return subst_pred(concrete(x, b), b, y)


def teq(x: SetTerm, y: SetTerm) -> Pred:
    if x.level != y.level:
        raise LevelMismatch(f"cannot equate {x} (level {x.level}) with {y} (level {y.level})")
    c = fresh(x.level - 1, x.support | y.support)
    return All(c, iff(tin(Atm(c), x), tin(Atm(c), y)))


def _comprehensions(zs: Iterable[SetTerm]) -> list[Comp]:
    zs = list(zs)
    for z in zs:
        if not isinstance(z, Comp):
            raise NotAComprehension(f"{z} is not a comprehension")
    if len({z.level for z in zs}) > 1:
        raise LevelMismatch("set operands have different levels")
    return zs


def _binder(level: int, zs, extra=()) -> Atom:
    avoid = set(extra)
    for z in zs:
        avoid |= z.support
    return fresh(level, avoid)


def intersect(zs: Iterable[SetTerm], level: int | None = None) -> Comp:
    zs = _comprehensions(zs)
    if not zs and level is None:
        raise ValueError("the level of an empty intersection must be given")
    a = _binder(zs[0].level - 1 if zs else level - 1, zs)
    if len(zs) == 1:
        return Comp(a, concrete(zs[0], a))   # a one-element conjunction is its conjunct
    return Comp(a, And(concrete(z, a) for z in zs))


def union(zs: Iterable[SetTerm], level: int | None = None) -> Comp:
    zs = _comprehensions(zs)
    if not zs and level is None:
        raise ValueError("the level of an empty union must be given")
    a = _binder(zs[0].level - 1 if zs else level - 1, zs)
    return Comp(a, Neg(And(Neg(concrete(z, a)) for z in zs)))


def complement(z: SetTerm) -> Comp:
    z, = _comprehensions([z])
    a = _binder(z.level - 1, [z])
    return Comp(a, Neg(concrete(z, a)))


def every(c: Atom, z: SetTerm) -> Comp:
    z, = _comprehensions([z])
    a = _binder(z.level - 1, [z], extra=[c])
    return Comp(a, All(c, concrete(z, a)))


def set_ops(kind: str, *args) -> Comp:
    if kind == "intersect":
        return intersect(*args)
    if kind == "union":
        return union(*args)
    if kind == "complement":
        return complement(*args)
    if kind == "every":
        return every(*args)
    raise ValueError(f"unknown set operation {kind!r}")
