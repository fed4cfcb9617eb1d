"""Leveled atoms and the permutation group acting on them.

An atom is a pair ``(level, index)``.  Every permutation is stored as a power
of the canonical shift ``theta: (l, k) -> (l + 1, k)`` followed by a finite,
level-preserving correction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import LevelMismatch, ParseError

_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_NAME_RE = re.compile(r"^([a-z])(\d*)$")


def index_to_name(index: int) -> str:
    letter, number = _LETTERS[index % 26], index // 26
    return letter if number == 0 else f"{letter}{number}"


def name_to_index(name: str) -> int:
    m = _NAME_RE.match(name)
    if not m:
        raise ParseError(f"bad atom name {name!r} (expected a letter and optional digits)")
    return _LETTERS.index(m.group(1)) + 26 * int(m.group(2) or 0)


@dataclass(frozen=True, order=True)
class Atom:
    level: int
    index: int

    @property
    def name(self) -> str:
        return index_to_name(self.index)

    def __str__(self) -> str:
        return f"{self.name}@{self.level}"

    def __repr__(self) -> str:
        return f"Atom({self})"


def atom(text: str) -> Atom:
    """Parse ``name@level``, e.g. ``a@1`` or ``b3@-2``."""
    name, sep, level = text.strip().partition("@")
    if not sep:
        raise ParseError(f"atom {text!r} lacks a level")
    try:
        lvl = int(level)
    except ValueError:
        raise ParseError(f"atom {text!r} has a non-integer level") from None
    return Atom(lvl, name_to_index(name))


AtomSet = frozenset  # iterate with sorted() for a deterministic (level, index) order


def fresh(level: int, avoid: Iterable[Atom] = ()) -> Atom:
    """The atom at ``level`` with the least index not used at that level in ``avoid``."""
    used = {a.index for a in avoid if a.level == level}
    i = 0
    while i in used:
        i += 1
    return Atom(level, i)


def fresh_many(level: int, n: int, avoid: Iterable[Atom] = ()) -> list[Atom]:
    avoid = set(avoid)
    out = []
    for _ in range(n):
        a = fresh(level, avoid)
        avoid.add(a)
        out.append(a)
    return out


def _shift_atom(a: Atom, j: int) -> Atom:
    return Atom(a.level + j, a.index) if j else a


class Permutation:
    """``apply(a) = correction(theta**shift (a))``; immutable."""

    __slots__ = ("shift", "_corr", "_hash")

    def __init__(self, shift: int = 0, correction: Mapping[Atom, Atom] | None = None):
        corr = {a: b for a, b in (correction or {}).items() if a != b}
        for a, b in corr.items():
            if a.level != b.level:
                raise LevelMismatch(f"correction maps {a} to {b} across levels")
        if set(corr) != set(corr.values()):
            raise ValueError("correction is not a bijection on its support")
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "_corr", corr)
        object.__setattr__(self, "_hash", hash((shift, frozenset(corr.items()))))

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def correction(self) -> tuple[tuple[Atom, Atom], ...]:
        return tuple(sorted(self._corr.items()))

    def nontrivial(self) -> frozenset:
        """Atoms moved by the correction part."""
        return frozenset(self._corr)

    def __call__(self, a: Atom) -> Atom:
        a = _shift_atom(a, self.shift)
        return self._corr.get(a, a)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.shift == other.shift and self._corr == other._corr

    def __hash__(self):
        return self._hash

    def __matmul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self):
        pairs = ", ".join(f"{a}->{b}" for a, b in self.correction)
        return f"Permutation(shift={self.shift}, {{{pairs}}})"


IDENTITY = Permutation()
THETA = Permutation(1)


def swap(a: Atom, b: Atom) -> Permutation:
    """The swapping ``(a b)``; both atoms must share a level."""
    if a.level != b.level:
        raise LevelMismatch(f"cannot swap {a} and {b}: levels differ")
    if a == b:
        return IDENTITY
    return Permutation(0, {a: b, b: a})


def apply(p: Permutation, a: Atom) -> Atom:
    return p(a)


def _conjugate(corr: Mapping[Atom, Atom], j: int) -> dict[Atom, Atom]:
    # theta^j . corr . theta^-j
    return {_shift_atom(a, j): _shift_atom(b, j) for a, b in corr.items()}


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``compose(p, q)(a) == p(q(a))``."""
    inner = _conjugate(q._corr, p.shift)
    outer = p._corr
    corr = {}
    for a in set(inner) | set(outer) | set(inner.values()):
        b = inner.get(a, a)
        corr[a] = outer.get(b, b)
    return Permutation(p.shift + q.shift, corr)


def invert(p: Permutation) -> Permutation:
    inv = {b: a for a, b in p._corr.items()}
    return Permutation(-p.shift, _conjugate(inv, -p.shift))


def power(p: Permutation, j: int) -> Permutation:
    base = p if j >= 0 else invert(p)
    out = IDENTITY
    for _ in range(abs(j)):
        out = compose(base, out)
    return out


def theta_power(j: int) -> Permutation:
    return Permutation(j)
