"""Prepoints and the validity relation.

A prepoint is a finite set of base facts ``a <- x`` ("x is an element of a")
together with a stack of pending amgis-substitutions.  The stack is never
unfolded into facts: a membership query against ``p[x <<- a]`` is answered by
asking ``p`` about ``elt(y, a)[a := x]`` instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .atoms import Atom, Permutation, fresh, swap
from .errors import LevelMismatch, NotDistinct
from .sigma import SmallSubst, apply_small_subst, subst_set, theta_subst
from .sugar import tin
from .terms import (
    All, And, Atm, Comp, Elt, Neg, Pred, SetTerm, concrete, full, numeral, permute,
)


@dataclass(frozen=True)
class BaseFact:
    target: Atom
    body: SetTerm

    def __post_init__(self):
        if self.body.level != self.target.level - 1:
            raise LevelMismatch(f"base fact {self}: body level {self.body.level} != {self.target.level - 1}")

    def __str__(self):
        return f"{self.target} <- {self.body}"


@dataclass(frozen=True, eq=False)
class Prepoint:
    base: frozenset = frozenset()
    stack: tuple = ()
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "base", frozenset(self.base))
        object.__setattr__(self, "stack", tuple(self.stack))
        for s in self.stack:
            if not isinstance(s, SmallSubst):
                raise TypeError(f"stack entries are SmallSubst, got {s!r}")

    @classmethod
    def of(cls, facts: Iterable = (), stack: Iterable[SmallSubst] = ()) -> "Prepoint":
        base = [f if isinstance(f, BaseFact) else BaseFact(*f) for f in facts]
        return cls(frozenset(base), tuple(stack))

    def __eq__(self, other):
        return isinstance(other, Prepoint) and self.base == other.base and self.stack == other.stack

    def __hash__(self):
        return hash((self.base, self.stack))

    def pop(self) -> "Prepoint":
        return Prepoint(self.base, self.stack[:-1])

    def push(self, s: SmallSubst) -> "Prepoint":
        return Prepoint(self.base, self.stack + (s,))

    def support_upper(self, level: int | None = None) -> frozenset:
        """A finite over-approximation of the support, sliced at ``level`` for theta entries.

        A theta-closed entry is supported by whole theta-orbits; only their
        members at ``level`` can clash with a fresh atom chosen there.
        """
        atoms = set()
        for f in self.base:
            atoms.add(f.target)
            atoms |= f.body.support
        for s in self.stack:
            atoms |= s.domain() | s.image_support()
            if s.theta_closed and level is not None:
                orbit = s.domain() | s.image_support()
                atoms |= {Atom(level, c.index) for c in orbit}
        return frozenset(atoms)

    def permute(self, p: Permutation) -> "Prepoint":
        base = frozenset(BaseFact(p(f.target), permute(p, f.body)) for f in self.base)
        return Prepoint(base, tuple(s.permute(p) for s in self.stack))

    def __str__(self):
        lines = ["prepoint"]
        lines += [str(f) for f in sorted(self.base, key=lambda f: (f.target, f.body.key()))]
        for s in self.stack:
            (a, x), kw = s.entries[0], ("amgis-theta" if s.theta_closed else "amgis")
            if len(s.entries) == 1:
                lines.append(f"{kw} {a} := {x}")
            else:
                lines.append("amgis " + ", ".join(f"{a} := {x}" for a, x in s.entries))
        return "\n".join(lines)


EMPTY = Prepoint()


def member(p: Prepoint, a: Atom, y: SetTerm) -> bool:
    """Is ``a <- y`` a fact of ``p``?"""
    if y.level != a.level - 1:
        raise LevelMismatch(f"{y} (level {y.level}) cannot be an element of {a}")
    k = (a, y)
    hit = p._memo.get(k)
    if hit is None:
        if not p.stack:
            hit = BaseFact(a, y) in p.base
        else:
            hit = sat(p.pop(), apply_small_subst(Elt(y, a), p.stack[-1]))
        p._memo[k] = hit
    return hit


def sat(p: Prepoint, X: Pred) -> bool:
    """``p |= X``; universal quantifiers are tested at one sufficiently fresh atom."""
    if isinstance(X, And):
        return all(sat(p, Y) for Y in X.args)
    if isinstance(X, Neg):
        return not sat(p, X.body)
    if isinstance(X, Elt):
        return member(p, X.target, X.body)
    if isinstance(X, All):
        b = X.binder
        b2 = fresh(b.level, p.support_upper(b.level) | X.support | {b})
        return sat(p, permute(swap(b2, b), X.body))
    raise TypeError(f"not a predicate: {X!r}")


def amgis(p: Prepoint, x: SetTerm, a: Atom, theta: bool = False) -> Prepoint:
    """``p[x <<- a]``, dual to substitution: ``sat(p, X[a:=x]) == sat(amgis(p, x, a), X)``."""
    if x.level != a.level:
        raise LevelMismatch(f"cannot amgis {x} (level {x.level}) into {a} (level {a.level})")
    s = theta_subst(a, x) if theta else SmallSubst(((a, x),))
    return p.push(s)


def amgis_multi(p: Prepoint, s: SmallSubst) -> Prepoint:
    return p.push(s)


def p_of(p: Prepoint, x: SetTerm | Atom, universe: Iterable[SetTerm]) -> frozenset:
    """The members of ``x`` at ``p`` among ``universe``."""
    return frozenset(y for y in universe if sat(p, tin(y, x)))


def exteq_bounded(p: Prepoint, u: SetTerm, u2: SetTerm, universe: Iterable[SetTerm]) -> bool:
    """Do ``u`` and ``u2`` have the same members at ``p`` among ``universe``?

    One-sided evidence only: a finite universe cannot witness extensional
    equality in general.
    """
    if u.level != u2.level:
        raise LevelMismatch(f"{u} and {u2} live at different levels")
    for y in universe:
        if y.level != u.level - 1:
            raise LevelMismatch(f"probe {y} is not at level {u.level - 1}")
        if sat(p, tin(y, u)) != sat(p, tin(y, u2)):
            return False
    return True


def inteq_bounded(p: Prepoint, u: SetTerm, u2: SetTerm, probes: Iterable[tuple]) -> bool:
    """Agreement of ``elt(z[c:=u], a)`` and ``elt(z[c:=u2], a)`` at ``p`` for each probe ``(z, c, a)``."""
    if u.level != u2.level:
        raise LevelMismatch(f"{u} and {u2} live at different levels")
    for z, c, a in probes:
        if c.level != u.level or z.level != a.level - 1:
            raise LevelMismatch(f"probe ({z}, {c}, {a}) is ill-leveled")
        if member(p, a, subst_set(z, c, u)) != member(p, a, subst_set(z, c, u2)):
            return False
    return True


def numeral_witness(n: int, m: int, i: int) -> tuple[Prepoint, Atom]:
    """A prepoint and atom separating the membership bodies of two distinct numerals.

    Returns ``(p, c)`` such that ``sat(p, concrete(numeral(n, i), c))`` and
    ``sat(p, concrete(numeral(m, i), c))`` differ.  When one numeral is zero,
    ``c`` is made to name the full set; otherwise ``c`` names the singleton of
    the atom separating the predecessors one stratum down.
    """
    if n == m:
        raise NotDistinct(f"numerals {n} and {m} coincide")
    c = fresh(i - 1)
    if n == 0 or m == 0:
        return amgis(Prepoint(), full(i - 1), c), c
    inner, c2 = numeral_witness(n - 1, m - 1, i - 2)
    d = fresh(i - 2, {c2})
    return amgis(inner, Comp(d, Elt(Atm(c2), d)), c), c


def numeral_body(n: int, i: int, c: Atom) -> Pred:
    return concrete(numeral(n, i), c)


# file format -------------------------------------------------------------------

def parse_prepoint(text: str) -> Prepoint:
    """Read the ``prepoint`` file format; amgis lines are pushed in order."""
    from .errors import ParseError
    from .syntax import Parser

    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, raw, line))
    if not lines or lines[0][2] != "prepoint":
        raise ParseError("model files start with the header 'prepoint'", text, 0)
    base, stack = [], []
    for lineno, raw, line in lines[1:]:
        kind, _, rest = line.partition(" ")
        if kind in ("amgis", "amgis-theta"):
            p = Parser(rest)
            a = p.atom()
            p.expect(":=")
            x = p.set_()
            p.done()
            if x.level != a.level:
                raise LevelMismatch(f"line {lineno}: {x} does not live at the level of {a}")
            stack.append(theta_subst(a, x) if kind == "amgis-theta" else SmallSubst(((a, x),)))
            continue
        p = Parser(line)
        a = p.atom()
        p.expect("<-")
        x = p.set_()
        p.done()
        base.append(BaseFact(a, x))
    return Prepoint.of(base, stack)
