"""Internal predicates and internal sets as nominal abstract syntax.

Two kinds of syntax share one representation discipline:

* predicates -- ``And`` (finite set), ``Neg``, ``All`` (binder), ``Elt``;
* sets       -- ``Atm`` (an atom as a set) and ``Comp`` (comprehension, binder).

Binders store a concrete atom.  Equality and hashing are alpha-equality: both
are computed from a canonical key in which bound atoms become de Bruijn
indices, so ``[a]X == [b](b a).X`` whenever ``b`` is fresh for ``X``.
"""

from __future__ import annotations

from typing import Iterable, Union

from .atoms import Atom, Permutation, fresh, swap
from .errors import FreshnessViolation, LevelMismatch, NotAComprehension


class Term:
    __slots__ = ("_key", "_supp")

    def __init__(self):
        self._key = None
        self._supp = None

    def key(self):
        if self._key is None:
            self._key = _key(self, {}, 0)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Term) and self.key() == other.key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    @property
    def support(self) -> frozenset:
        if self._supp is None:
            self._supp = _support(self)
        return self._supp

    def __str__(self):
        return show(self)

    def __repr__(self):
        return f"<{type(self).__name__} {show(self)}>"


class Pred(Term):
    __slots__ = ()


class SetTerm(Term):
    __slots__ = ()

    @property
    def level(self) -> int:
        raise NotImplementedError


class And(Pred):
    __slots__ = ("args",)

    def __init__(self, args: Iterable[Pred] = ()):
        super().__init__()
        uniq = {}
        for x in args:
            if not isinstance(x, Pred):
                raise TypeError(f"And expects predicates, got {x!r}")
            uniq.setdefault(x, x)
        self.args = tuple(sorted(uniq.values(), key=Term.key))


class Neg(Pred):
    __slots__ = ("body",)

    def __init__(self, body: Pred):
        super().__init__()
        if not isinstance(body, Pred):
            raise TypeError(f"Neg expects a predicate, got {body!r}")
        self.body = body


class All(Pred):
    __slots__ = ("binder", "body")

    def __init__(self, binder: Atom, body: Pred):
        super().__init__()
        if not isinstance(body, Pred):
            raise TypeError(f"All expects a predicate body, got {body!r}")
        self.binder = binder
        self.body = body


class Elt(Pred):
    __slots__ = ("body", "target")

    def __init__(self, body: SetTerm, target: Atom):
        super().__init__()
        if not isinstance(body, SetTerm):
            raise TypeError(f"Elt expects a set, got {body!r}")
        if body.level != target.level - 1:
            raise LevelMismatch(f"elt({body}, {target}): set level {body.level} != {target.level - 1}")
        self.body = body
        self.target = target


class Atm(SetTerm):
    __slots__ = ("atom",)

    def __init__(self, atom: Atom):
        super().__init__()
        self.atom = atom

    @property
    def level(self) -> int:
        return self.atom.level


class Comp(SetTerm):
    __slots__ = ("binder", "body")

    def __init__(self, binder: Atom, body: Pred):
        super().__init__()
        if not isinstance(body, Pred):
            raise TypeError(f"Comp expects a predicate body, got {body!r}")
        self.binder = binder
        self.body = body

    @property
    def level(self) -> int:
        return self.binder.level + 1


AnyTerm = Union[Pred, SetTerm]

TOP = And(())
BOT = Neg(TOP)


# canonical keys --------------------------------------------------------------

def _ref(a: Atom, env: dict, depth: int):
    d = env.get(a)
    if d is None:
        return ("f", a.level, a.index)
    return ("b", depth - d - 1)


def _key(t: Term, env: dict, depth: int):
    if not env or env.keys().isdisjoint(t.support):
        # de Bruijn indices make the key of a subterm with no captured atoms
        # context-independent, so the cached standalone key can be reused
        if t._key is None:
            t._key = _compute_key(t, {}, 0)
        return t._key
    return _compute_key(t, env, depth)


def _compute_key(t: Term, env: dict, depth: int):
    if isinstance(t, Atm):
        return ("A", _ref(t.atom, env, depth))
    if isinstance(t, Elt):
        return ("E", _key(t.body, env, depth), _ref(t.target, env, depth))
    if isinstance(t, Neg):
        return ("N", _key(t.body, env, depth))
    if isinstance(t, And):
        return ("&", tuple(sorted(_key(x, env, depth) for x in t.args)))
    if isinstance(t, (All, Comp)):
        inner = dict(env)
        inner[t.binder] = depth
        tag = "V" if isinstance(t, All) else "C"
        return (tag, t.binder.level, _key(t.body, inner, depth + 1))
    raise TypeError(t)


def alpha_eq(t1: Term, t2: Term) -> bool:
    return t1 == t2


# support and permutation -----------------------------------------------------

def _support(t: Term) -> frozenset:
    if isinstance(t, Atm):
        return frozenset((t.atom,))
    if isinstance(t, Elt):
        return t.body.support | {t.target}
    if isinstance(t, Neg):
        return t.body.support
    if isinstance(t, And):
        return frozenset().union(*(x.support for x in t.args))
    if isinstance(t, (All, Comp)):
        return t.body.support - {t.binder}
    raise TypeError(t)


def support(t: Term) -> frozenset:
    return t.support


def permute(p: Permutation, t: Term) -> Term:
    """Rename every atom of ``t`` (binders included) by ``p``."""
    if isinstance(t, Atm):
        return Atm(p(t.atom))
    if isinstance(t, Elt):
        return Elt(permute(p, t.body), p(t.target))
    if isinstance(t, Neg):
        return Neg(permute(p, t.body))
    if isinstance(t, And):
        return And(permute(p, x) for x in t.args)
    if isinstance(t, All):
        return All(p(t.binder), permute(p, t.body))
    if isinstance(t, Comp):
        return Comp(p(t.binder), permute(p, t.body))
    raise TypeError(t)


def atoms_of(t: Term) -> frozenset:
    """All atoms occurring in ``t``, bound or free."""
    if isinstance(t, Atm):
        return frozenset((t.atom,))
    if isinstance(t, Elt):
        return atoms_of(t.body) | {t.target}
    if isinstance(t, Neg):
        return atoms_of(t.body)
    if isinstance(t, And):
        return frozenset().union(*(atoms_of(x) for x in t.args))
    if isinstance(t, (All, Comp)):
        return atoms_of(t.body) | {t.binder}
    raise TypeError(t)


# abstraction / concretion ----------------------------------------------------

def abstract(a: Atom, body: Pred) -> Comp:
    return Comp(a, body)


def concrete(s: SetTerm, b: Atom) -> Pred:
    """``s@b``: the body of comprehension ``s`` with its binder renamed to ``b``."""
    if not isinstance(s, Comp):
        raise NotAComprehension(f"cannot concrete {s}: not a comprehension")
    if b.level != s.binder.level:
        raise LevelMismatch(f"cannot concrete {s} at {b}: expected level {s.binder.level}")
    if b == s.binder:
        return s.body
    if b in s.support:
        raise FreshnessViolation(f"{b} is free in {s}")
    return permute(swap(b, s.binder), s.body)


def open_binder(t: All | Comp, avoid: Iterable[Atom] = ()) -> tuple[Atom, Pred]:
    """Rename the binder of ``t`` away from ``avoid``; returns ``(binder, body)``."""
    avoid = set(avoid)
    if t.binder not in avoid:
        return t.binder, t.body
    b = fresh(t.binder.level, avoid | t.body.support | {t.binder})
    return b, permute(swap(b, t.binder), t.body)


# measures --------------------------------------------------------------------

def measures(t: Term) -> tuple[int, int]:
    """``(age, minlev)``; ``And(())`` contributes the default level 0."""
    if isinstance(t, Atm):
        return 0, t.atom.level
    if isinstance(t, Elt):
        age, lo = measures(t.body)
        return age + 1, min(lo, t.target.level)
    if isinstance(t, Neg):
        age, lo = measures(t.body)
        return age + 1, lo
    if isinstance(t, And):
        ms = [measures(x) for x in t.args]
        return 1 + max((m[0] for m in ms), default=0), min([0] + [m[1] for m in ms])
    if isinstance(t, All):
        age, lo = measures(t.body)
        return age + 1, min(lo, t.binder.level)
    if isinstance(t, Comp):
        age, lo = measures(t.body)
        return age, min(lo, t.binder.level)
    raise TypeError(t)


def size(t: Term) -> int:
    if isinstance(t, Atm):
        return 1
    if isinstance(t, Elt):
        return 1 + size(t.body)
    if isinstance(t, (Neg, All, Comp)):
        return 1 + size(t.body)
    if isinstance(t, And):
        return 1 + sum(size(x) for x in t.args)
    raise TypeError(t)


# constructors and sugar that need no substitution ------------------------------

def atm(a: Atom) -> Atm:
    return Atm(a)


def elt(x: SetTerm, a: Atom) -> Elt:
    return Elt(x, a)


def neg(x: Pred) -> Neg:
    return Neg(x)


def and_(*xs: Pred) -> And:
    return And(xs)


def all_(a: Atom, x: Pred) -> All:
    return All(a, x)


def mk_constant(kind: str) -> Pred:
    if kind == "top":
        return TOP
    if kind == "bot":
        return BOT
    raise ValueError(f"unknown constant {kind!r}")


def or_(x: Pred, y: Pred) -> Pred:
    return Neg(And((Neg(x), Neg(y))))


def imp(x: Pred, y: Pred) -> Pred:
    return or_(Neg(x), y)


def iff(x: Pred, y: Pred) -> Pred:
    return And((imp(x, y), imp(y, x)))


def mk_connective(kind: str, x: Pred, y: Pred) -> Pred:
    try:
        return {"or": or_, "imp": imp, "iff": iff}[kind](x, y)
    except KeyError:
        raise ValueError(f"unknown connective {kind!r}") from None


def _binder_for(level: int) -> Atom:
    return Atom(level, 0)


def empty(i: int) -> Comp:
    return Comp(_binder_for(i - 1), BOT)


def full(i: int) -> Comp:
    return Comp(_binder_for(i - 1), TOP)


def mk_set_constant(kind: str, i: int) -> Comp:
    if kind == "empty":
        return empty(i)
    if kind == "full":
        return full(i)
    raise ValueError(f"unknown set constant {kind!r}")


def contains(x: SetTerm) -> Comp:
    """``[c] elt(x, c)`` with ``c`` fresh for ``x``; one level up by two."""
    c = fresh(x.level + 1, x.support)
    return Comp(c, Elt(x, c))


def numeral(n: int, i: int) -> SetTerm:
    if n < 0:
        raise ValueError("numerals are natural numbers")
    if n == 0:
        return empty(i)
    return contains(numeral(n - 1, i - 2))


# printing --------------------------------------------------------------------

def show(t: Term) -> str:
    if isinstance(t, Atm):
        return f"atm({t.atom})"
    if isinstance(t, Comp):
        if not t.support and t.body == BOT:
            return f"empty@{t.level}"
        if not t.support and t.body == TOP:
            return f"full@{t.level}"
        return f"[{t.binder}] {show(t.body)}"
    if isinstance(t, Elt):
        return f"elt({show(t.body)}, {t.target})"
    if isinstance(t, Neg):
        if t.body == TOP:
            return "bot"
        return f"neg {show(t.body)}"
    if isinstance(t, And):
        if not t.args:
            return "top"
        return "and{" + "; ".join(show(x) for x in t.args) + "}"
    if isinstance(t, All):
        return f"all [{t.binder}] {show(t.body)}"
    raise TypeError(t)
