"""The sigma-action: capture-avoiding substitution of internal sets for atoms.

The only non-structural rule is membership in the substituted atom itself::

    elt(y, a)[a := [a']X]  =  X[a' := y[a := [a']X]]

which re-normalises on the fly.  The recursion descends in (level, age) order
and so terminates on well-formed input; a step budget guards against bugs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping

from .atoms import Atom, Permutation, theta_power
from .errors import FreshnessViolation, FuelExhausted, LevelMismatch
from .terms import (
    All, And, Atm, Comp, Elt, Neg, Pred, SetTerm, Term, open_binder, permute,
)

DEFAULT_FUEL = 10**6


def _fuel_limit() -> int:
    return int(os.environ.get("STRATOS_FUEL", DEFAULT_FUEL))


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("sigma-action exceeded its step budget (set STRATOS_FUEL to raise it)")


def _check_levels(a: Atom, x: SetTerm):
    if x.level != a.level:
        raise LevelMismatch(f"cannot substitute {x} (level {x.level}) for {a} (level {a.level})")


def subst_pred(X: Pred, a: Atom, x: SetTerm) -> Pred:
    """``X[a := x]``."""
    _check_levels(a, x)
    return _sp(X, a, x, _Budget(_fuel_limit()))


def subst_set(z: SetTerm, a: Atom, x: SetTerm) -> SetTerm:
    """``z[a := x]``."""
    _check_levels(a, x)
    return _ss(z, a, x, _Budget(_fuel_limit()))


def subst(t: Term, a: Atom, x: SetTerm) -> Term:
    return subst_set(t, a, x) if isinstance(t, SetTerm) else subst_pred(t, a, x)


def _sp(X: Pred, a: Atom, x: SetTerm, fuel: _Budget) -> Pred:
    fuel.spend()
    if isinstance(X, And):
        return And(_sp(y, a, x, fuel) for y in X.args)
    if isinstance(X, Neg):
        return Neg(_sp(X.body, a, x, fuel))
    if isinstance(X, All):
        b, body = open_binder(X, x.support | {a})
        return All(b, _sp(body, a, x, fuel))
    if isinstance(X, Elt):
        y = _ss(X.body, a, x, fuel)
        if X.target != a:
            return Elt(y, X.target)
        if isinstance(x, Atm):
            return Elt(y, x.atom)
        # x = [a']Z is closed off: a' is bound, so Z[a' := y] needs no renaming of x
        return _sp(x.body, x.binder, y, fuel)
    raise TypeError(f"not a predicate: {X!r}")


def _ss(z: SetTerm, a: Atom, x: SetTerm, fuel: _Budget) -> SetTerm:
    fuel.spend()
    if isinstance(z, Atm):
        return x if z.atom == a else z
    if isinstance(z, Comp):
        c, body = open_binder(z, x.support | {a})
        return Comp(c, _sp(body, a, x, fuel))
    raise TypeError(f"not a set: {z!r}")


# small substitutions -----------------------------------------------------------

@dataclass(frozen=True)
class SmallSubst:
    """A finite atom-to-set map, or the theta-closure of a single seed pair.

    Maps with two or more entries must have every domain atom fresh for every
    image, so sequential application is order-independent.  A singleton map is
    just one sigma-action and carries no side condition.
    """

    entries: tuple = ()
    theta_closed: bool = False

    def __post_init__(self):
        entries = tuple(sorted(self.entries, key=lambda e: e[0]))
        object.__setattr__(self, "entries", entries)
        doms = [a for a, _ in entries]
        if len(set(doms)) != len(doms):
            raise ValueError("duplicate atom in substitution domain")
        for a, x in entries:
            _check_levels(a, x)
        if self.theta_closed:
            if len(entries) != 1:
                raise ValueError("a theta-closed substitution has exactly one seed pair")
            (a, x), = entries
            clash = [c for c in x.support if c.index == a.index]
            if clash:
                raise FreshnessViolation(
                    f"theta-orbit of {a} meets the theta-orbit of {x} at {clash[0]}")
        elif len(entries) > 1:
            for a in doms:
                for _, x in entries:
                    if a in x.support:
                        raise FreshnessViolation(f"domain atom {a} occurs in image {x}")

    @classmethod
    def of(cls, mapping: Mapping[Atom, SetTerm] | Iterable = ()) -> "SmallSubst":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(tuple(items))

    @property
    def seed(self) -> tuple[Atom, SetTerm]:
        return self.entries[0]

    def domain(self) -> frozenset:
        return frozenset(a for a, _ in self.entries)

    def image_support(self) -> frozenset:
        return frozenset().union(*(x.support for _, x in self.entries))

    def materialize(self, atoms: Iterable[Atom]) -> list[tuple[Atom, SetTerm]]:
        """The entries whose domain atom lies in ``atoms``; theta instances built on demand."""
        atoms = set(atoms)
        if not self.theta_closed:
            return [(a, x) for a, x in self.entries if a in atoms]
        a0, x0 = self.seed
        out = []
        for b in sorted(atoms):
            if b.index == a0.index:
                j = b.level - a0.level
                out.append((b, permute(theta_power(j), x0)))
        return out

    def permute(self, p: Permutation) -> "SmallSubst":
        if self.theta_closed and p.nontrivial():
            raise ValueError("only pure shifts preserve a theta-closed substitution")
        return SmallSubst(tuple((p(a), permute(p, x)) for a, x in self.entries), self.theta_closed)

    def __str__(self):
        if self.theta_closed:
            a, x = self.seed
            return f"[{a} :=theta {x}]"
        return " ".join(f"[{a} := {x}]" for a, x in self.entries) or "[]"


def theta_subst(a: Atom, x: SetTerm) -> SmallSubst:
    """``[a theta:= x]``: maps ``theta^j(a)`` to ``theta^j . x`` for every integer ``j``."""
    return SmallSubst(((a, x),), theta_closed=True)


def apply_small_subst(t: Term, s: SmallSubst) -> Term:
    """``t sigma``: the entries whose atoms are free in ``t``, applied in turn."""
    for a, x in s.materialize(t.support):
        t = subst(t, a, x)
    return t
