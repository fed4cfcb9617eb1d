"""Finite equality theories, congruence certificates and Herbrand prepoints.

Derivability in the deductive closure is only semi-decidable, so queries are
answered by a bounded forward search that returns either a checkable
certificate or ``NotWithinBound``.  The latter is never a refutation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .atoms import Atom, fresh, swap, theta_power
from .errors import LevelMismatch, TheoryNotThetaClosed
from .sigma import subst_set
from .terms import (
    All, And, Atm, Comp, Elt, Neg, Pred, SetTerm, Term, atoms_of, permute,
)


@dataclass(frozen=True)
class Theory:
    pairs: tuple = ()
    theta_closed: bool = False

    def __post_init__(self):
        pairs = tuple((u, v) for u, v in self.pairs)
        for u, v in pairs:
            if u.level != v.level:
                raise LevelMismatch(f"theory pair ({u}, {v}) relates different levels")
        object.__setattr__(self, "pairs", pairs)

    def support(self) -> frozenset:
        return frozenset().union(*(u.support | v.support for u, v in self.pairs))

    def pair(self, i: int, shift: int = 0) -> tuple[SetTerm, SetTerm]:
        u, v = self.pairs[i]
        if shift:
            p = theta_power(shift)
            return permute(p, u), permute(p, v)
        return u, v

    def __str__(self):
        lines = ["theta-closed"] if self.theta_closed else []
        lines += [f"eq: {u} == {v}" for u, v in self.pairs]
        return "\n".join(lines)


# certificates ----------------------------------------------------------------

@dataclass(frozen=True)
class Axiom:
    index: int
    shift: int = 0


@dataclass(frozen=True)
class Refl:
    term: SetTerm


@dataclass(frozen=True)
class Sym:
    child: object


@dataclass(frozen=True)
class Trans:
    left: object
    right: object


@dataclass(frozen=True)
class Cong:
    context: SetTerm
    hole: Atom
    child: object


EqDeriv = Axiom | Refl | Sym | Trans | Cong


class InvalidCertificate(Exception):
    def __init__(self, msg: str, path: tuple):
        super().__init__(f"{'/'.join(path) or 'root'}: {msg}")
        self.path = path


def conclusion(T: Theory, d, path: tuple = ()) -> tuple[SetTerm, SetTerm]:
    """The pair concluded by ``d``; raises ``InvalidCertificate`` on a bad node."""
    if isinstance(d, Refl):
        return d.term, d.term
    if isinstance(d, Axiom):
        if not 0 <= d.index < len(T.pairs):
            raise InvalidCertificate(f"no axiom {d.index}", path)
        if d.shift and not T.theta_closed:
            raise InvalidCertificate("shifted axiom in a theory that is not theta-closed", path)
        return T.pair(d.index, d.shift)
    if isinstance(d, Sym):
        u, v = conclusion(T, d.child, path + ("sym",))
        return v, u
    if isinstance(d, Trans):
        u, v = conclusion(T, d.left, path + ("trans.0",))
        v2, w = conclusion(T, d.right, path + ("trans.1",))
        if v != v2:
            raise InvalidCertificate(f"middle terms differ: {v} vs {v2}", path)
        return u, w
    if isinstance(d, Cong):
        u, v = conclusion(T, d.child, path + ("cong",))
        if d.hole.level != u.level:
            raise InvalidCertificate(f"hole {d.hole} is not at level {u.level}", path)
        return subst_set(d.context, d.hole, u), subst_set(d.context, d.hole, v)
    raise InvalidCertificate(f"unknown node {d!r}", path)


def check_eq_derivation(T: Theory, d, diagnostics: list | None = None) -> bool:
    try:
        conclusion(T, d)
        return True
    except InvalidCertificate as e:
        if diagnostics is not None:
            diagnostics.append(str(e))
        return False


def height(d) -> int:
    if isinstance(d, (Axiom, Refl)):
        return 0
    if isinstance(d, Trans):
        return 1 + max(height(d.left), height(d.right))
    return 1 + height(d.child)


def show_cert(T: Theory, d, indent: int = 0) -> str:
    u, v = conclusion(T, d)
    pad = "  " * indent
    if isinstance(d, Axiom):
        head = f"Axiom {d.index}" + (f" shift={d.shift}" if d.shift else "")
        kids = []
    elif isinstance(d, Refl):
        head, kids = "Refl", []
    elif isinstance(d, Sym):
        head, kids = "Sym", [d.child]
    elif isinstance(d, Trans):
        head, kids = "Trans", [d.left, d.right]
    else:
        head, kids = f"Cong [{d.hole}] {d.context}", [d.child]
    lines = [f"{pad}{head} :: {u} == {v}"]
    lines += [show_cert(T, k, indent + 1) for k in kids]
    return "\n".join(lines)


# bounded search --------------------------------------------------------------

@dataclass(frozen=True)
class Derivable:
    cert: object

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotWithinBound:
    reason: str = ""

    def __bool__(self):
        return False


def set_subterms(t: Term) -> set:
    """Every set occurring in ``t`` (including ``t`` itself when it is a set)."""
    out = set()

    def go(s):
        if isinstance(s, SetTerm):
            out.add(s)
        if isinstance(s, (Comp, All, Neg)):
            go(s.body)
        elif isinstance(s, Elt):
            go(s.body)
            out.add(Atm(s.target))
        elif isinstance(s, And):
            for x in s.args:
                go(x)

    go(t)
    return out


def _occurrences(t: Term, u: SetTerm) -> list[tuple]:
    """Paths to free occurrences of ``u`` in ``t``; an atomic ``u`` also occurs as an elt target."""
    out = []
    target = u.atom if isinstance(u, Atm) else None

    def go(s, bound, path):
        if isinstance(s, SetTerm) and s == u and not (u.support & bound):
            out.append(path)
            return
        if isinstance(s, (Comp, All)):
            go(s.body, bound | {s.binder}, path + (0,))
        elif isinstance(s, Neg):
            go(s.body, bound, path + (0,))
        elif isinstance(s, Elt):
            go(s.body, bound, path + (0,))
            if s.target == target and target not in bound:
                out.append(path + ("T",))
        elif isinstance(s, And):
            for i, x in enumerate(s.args):
                go(x, bound, path + (i,))

    go(t, frozenset(), ())
    return out


def _plug(t: Term, paths: frozenset, a: Atom, path: tuple = ()) -> Term:
    if path in paths:
        return Atm(a)
    if not any(p[:len(path)] == path for p in paths):
        return t
    if isinstance(t, Comp):
        return Comp(t.binder, _plug(t.body, paths, a, path + (0,)))
    if isinstance(t, All):
        return All(t.binder, _plug(t.body, paths, a, path + (0,)))
    if isinstance(t, Neg):
        return Neg(_plug(t.body, paths, a, path + (0,)))
    if isinstance(t, Elt):
        target = a if path + ("T",) in paths else t.target
        return Elt(_plug(t.body, paths, a, path + (0,)), target)
    if isinstance(t, And):
        return And(_plug(x, paths, a, path + (i,)) for i, x in enumerate(t.args))
    return t


def contexts_for(t: SetTerm, u: SetTerm, avoid: Iterable[Atom] = (), max_subsets: int = 4):
    """Pairs ``(z, a)`` with ``z[a := u] == t`` obtained by abstracting occurrences of ``u``.

    All non-empty subsets of occurrences are tried when there are at most
    ``max_subsets`` of them; otherwise each single occurrence and all of them.
    """
    occ = _occurrences(t, u)
    if not occ:
        return []
    a = fresh(u.level, atoms_of(t) | u.support | set(avoid))
    if len(occ) <= max_subsets:
        choices = [c for r in range(1, len(occ) + 1) for c in combinations(occ, r)]
    else:
        choices = [(o,) for o in occ] + [tuple(occ)]
    return [(_plug(t, frozenset(c), a), a) for c in choices]


def _query_levels(terms) -> set:
    levels = set()
    for t in terms:
        for s in set_subterms(t):
            levels.add(s.level)
    return levels


def eqcent_bounded(T: Theory, x: SetTerm, x2: SetTerm, depth: int,
                   contexts: Iterable[SetTerm] = (), max_pairs: int = 20000):
    """Search for a certificate of ``x == x2`` of height at most ``depth``."""
    if x.level != x2.level:
        raise LevelMismatch(f"{x} and {x2} live at different levels")
    if x == x2:
        return Derivable(Refl(x))

    levels = _query_levels([x, x2])
    if T.theta_closed:
        base = [(i, j) for i, (u, _) in enumerate(T.pairs)
                for j in sorted({lv - u.level for lv in levels})]
    else:
        base = [(i, 0) for i in range(len(T.pairs))]

    pool = set()
    for t in [x, x2, *contexts]:
        pool |= set_subterms(t)
    for i, j in base:
        for t in T.pair(i, j):
            pool |= set_subterms(t)
    pool = sorted(pool, key=Term.key)

    known: dict = {}
    for i, j in base:
        u, v = T.pair(i, j)
        if u != v:
            known.setdefault((u, v), Axiom(i, j))
    goal = (x, x2)
    if goal in known:
        return Derivable(known[goal])

    for _ in range(depth):
        fresh_items = {}

        def add(k, d):
            if k[0] != k[1] and k not in known and k not in fresh_items:
                fresh_items[k] = d

        items = list(known.items())
        for (u, v), d in items:
            add((v, u), Sym(d))
        by_left: dict = {}
        for (u, v), d in items:
            by_left.setdefault(u, []).append((v, d))
        for (u, v), d in items:
            for w, d2 in by_left.get(v, ()):
                add((u, w), Trans(d, d2))
        for (u, v), d in items:
            for t in pool:
                for z, a in contexts_for(t, u, v.support):
                    add((t, subst_set(z, a, v)), Cong(z, a, d))
        known.update(fresh_items)
        if goal in known:
            return Derivable(known[goal])
        if not fresh_items:
            return NotWithinBound("closure saturated")
        if len(known) > max_pairs:
            return NotWithinBound(f"search exceeded {max_pairs} derived pairs")
    return NotWithinBound(f"no certificate of height <= {depth}")


# Herbrand prepoints ------------------------------------------------------------

class Tri(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


def _require_theta(T: Theory):
    if not T.theta_closed:
        raise TheoryNotThetaClosed("Herbrand prepoints need a theta-closed theory")


def herbrand_member(T: Theory, a2: Atom, x: SetTerm, depth: int, **kw):
    """Is ``x`` an element of ``a2`` at the Herbrand prepoint of ``T``?"""
    _require_theta(T)
    if x.level != a2.level - 1:
        raise LevelMismatch(f"{x} (level {x.level}) cannot be an element of {a2}")
    return eqcent_bounded(T, Atm(theta_power(-1)(a2)), x, depth, **kw)


def herbrand_sat(T: Theory, X: Pred, depth: int, closed_world: bool = False) -> Tri:
    """Three-valued validity at the Herbrand prepoint.

    Memberships that are not derivable within ``depth`` are unknown, or false
    when ``closed_world`` is set.
    """
    _require_theta(T)
    indices = {a.index for a in T.support()}

    def go(X) -> Tri:
        if isinstance(X, And):
            vals = [go(Y) for Y in X.args]
            if Tri.FALSE in vals:
                return Tri.FALSE
            return Tri.UNKNOWN if Tri.UNKNOWN in vals else Tri.TRUE
        if isinstance(X, Neg):
            v = go(X.body)
            return {Tri.TRUE: Tri.FALSE, Tri.FALSE: Tri.TRUE}.get(v, Tri.UNKNOWN)
        if isinstance(X, Elt):
            if herbrand_member(T, X.target, X.body, depth):
                return Tri.TRUE
            return Tri.FALSE if closed_world else Tri.UNKNOWN
        if isinstance(X, All):
            b = X.binder
            avoid = X.support | {b} | {Atom(b.level, k) for k in indices}
            b2 = fresh(b.level, avoid)
            return go(permute(swap(b2, b), X.body))
        raise TypeError(f"not a predicate: {X!r}")

    return go(X)


# file format -------------------------------------------------------------------

def parse_theory(text: str) -> Theory:
    from .errors import ParseError
    from .syntax import Parser

    pairs, theta = [], False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "theta-closed":
            theta = True
            continue
        if not line.startswith("eq:"):
            raise ParseError(f"line {lineno}: expected 'eq: S == S' or 'theta-closed'", raw, 0)
        p = Parser(line[3:])
        u = p.set_()
        p.expect("==")
        v = p.set_()
        p.done()
        pairs.append((u, v))
    return Theory(tuple(pairs), theta)
