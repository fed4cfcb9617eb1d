"""Two-sided sequent calculus over internal predicates.

Contexts are finite sets, so exchange and contraction are implicit.  A rule
node's premises may either drop the principal formula or keep it; both forms
are accepted.  ``AllL`` instantiates with an atom only, never a set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .atoms import Atom, fresh, swap
from .errors import FuelExhausted, InvalidDerivation, LevelMismatch, ParseError
from .sigma import subst_pred
from .terms import All, And, Atm, Comp, Neg, Pred, atoms_of, concrete, permute, show

RULES = ("Ax", "AndL", "AndR", "NegL", "NegR", "AllL", "AllR", "Cut")


@dataclass(frozen=True)
class Sequent:
    left: frozenset
    right: frozenset

    @classmethod
    def of(cls, left: Iterable[Pred] = (), right: Iterable[Pred] = ()) -> "Sequent":
        return cls(frozenset(left), frozenset(right))

    def support(self) -> frozenset:
        return frozenset().union(*(X.support for X in self.left | self.right))

    def __str__(self):
        def side(xs):
            return ", ".join(show(x) for x in sorted(xs))
        return f"{side(self.left)} |- {side(self.right)}".strip()


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Sequent
    premises: tuple = ()
    principal: Pred | None = None
    atom: object = None  # AllL witness or AllR eigen-atom

    @property
    def left(self):
        return self.conclusion.left

    @property
    def right(self):
        return self.conclusion.right

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def has_cut(self) -> bool:
        return any(n.rule == "Cut" for n in self.nodes())


def derivation_atoms(d: Derivation) -> frozenset:
    out = set()
    for n in d.nodes():
        for X in n.left | n.right:
            out |= atoms_of(X)
        if isinstance(n.atom, Atom):
            out.add(n.atom)
    return frozenset(out)


def instantiate(P: All, w: Atom) -> Pred:
    """``X[a := w]`` for ``P = all [a] X``."""
    return subst_pred(P.body, P.binder, Atm(w))


# checking --------------------------------------------------------------------

class _Bad(Exception):
    pass


def _either(actual: frozenset, ctx: frozenset, P: Pred, extra: Iterable[Pred]) -> bool:
    extra = frozenset(extra)
    return actual in ((ctx - {P}) | extra, ctx | extra)


def _check_node(d: Derivation):
    G, D, P, prem = d.left, d.right, d.principal, d.premises
    if d.rule not in RULES:
        raise _Bad(f"unknown rule {d.rule!r}")
    if P is None:
        raise _Bad("missing principal formula")
    if d.rule == "Ax":
        if prem or P not in G or P not in D:
            raise _Bad("axiom formula must occur on both sides")
        return
    if d.rule == "Cut":
        if len(prem) != 2:
            raise _Bad("cut needs two premises")
        a, b = prem
        if (a.left, a.right) != (G | {P}, D) or (b.left, b.right) != (G, D | {P}):
            raise _Bad("cut premises do not match")
        return
    side = G if d.rule.endswith("L") else D
    if P not in side:
        raise _Bad(f"principal {show(P)} missing from conclusion")
    kind = {"And": And, "Neg": Neg, "All": All}[d.rule[:-1]]
    if not isinstance(P, kind):
        raise _Bad(f"principal {show(P)} is not a {d.rule[:-1]} formula")
    if d.rule == "AndR":
        for q in prem:
            if q.left != G or not any(_either(q.right, D, P, [Y]) for Y in P.args):
                raise _Bad("an AndR premise matches no conjunct")
        for Y in P.args:
            if not any(_either(q.right, D, P, [Y]) for q in prem):
                raise _Bad(f"conjunct {show(Y)} has no premise")
        return
    if len(prem) != 1:
        raise _Bad(f"{d.rule} has exactly one premise")
    q, = prem
    if d.rule == "AndL":
        ok = q.right == D and _either(q.left, G, P, P.args)
    elif d.rule == "NegL":
        ok = q.right == D | {P.body} and _either(q.left, G, P, ())
    elif d.rule == "NegR":
        ok = q.left == G | {P.body} and _either(q.right, D, P, ())
    elif d.rule == "AllL":
        w = d.atom
        if not isinstance(w, Atom):
            raise _Bad("AllL witness must be an atom")
        if w.level != P.binder.level:
            raise _Bad(f"witness {w} is at the wrong level")
        ok = q.right == D and _either(q.left, G, P, [instantiate(P, w)])
    else:
        e = d.atom
        if not isinstance(e, Atom) or e.level != P.binder.level:
            raise _Bad("AllR needs an eigen-atom at the binder's level")
        if e in d.conclusion.support():
            raise _Bad(f"eigen-atom {e} is not fresh for the conclusion")
        ok = q.left == G and _either(q.right, D, P, [open_at(P, e)])
    if not ok:
        raise _Bad(f"{d.rule} premise does not match")


def open_at(P: All, e: Atom) -> Pred:
    """``(e a).X`` for ``P = all [a] X`` and ``e`` fresh for ``P``."""
    return concrete(Comp(P.binder, P.body), e)


def check_derivation(d: Derivation, diagnostics: list | None = None) -> bool:
    def go(n, path):
        try:
            _check_node(n)
        except _Bad as e:
            if diagnostics is not None:
                diagnostics.append(f"{'/'.join(map(str, path)) or 'root'} ({n.rule}): {e}")
            return False
        return all(go(q, path + (i,)) for i, q in enumerate(n.premises))
    try:
        return go(d, ())
    except LevelMismatch as e:
        if diagnostics is not None:
            diagnostics.append(str(e))
        return False


# permutation, renaming, weakening -------------------------------------------

def permute_derivation(p, d: Derivation) -> Derivation:
    def f(X):
        return permute(p, X)
    return Derivation(
        d.rule,
        Sequent(frozenset(map(f, d.left)), frozenset(map(f, d.right))),
        tuple(permute_derivation(p, q) for q in d.premises),
        None if d.principal is None else f(d.principal),
        p(d.atom) if isinstance(d.atom, Atom) else d.atom,
    )


def _refresh_eigen(d: Derivation, avoid: frozenset) -> Derivation:
    """Rename the eigen-atom of an AllR node away from ``avoid``."""
    e = d.atom
    e2 = fresh(e.level, avoid | derivation_atoms(d))
    q = permute_derivation(swap(e, e2), d.premises[0])
    return Derivation(d.rule, d.conclusion, (q,), d.principal, e2)


def _subst_atom(d: Derivation, a: Atom, b: Atom) -> Derivation:
    """Replace free ``a`` by ``b`` throughout ``d``."""
    def f(X):
        return subst_pred(X, a, Atm(b))
    atom = d.atom
    if d.rule == "AllR" and atom in (a, b):
        d = _refresh_eigen(d, frozenset({a, b}))
        atom = d.atom
    elif d.rule == "AllL" and atom == a:
        atom = b
    return Derivation(
        d.rule,
        Sequent(frozenset(map(f, d.left)), frozenset(map(f, d.right))),
        tuple(_subst_atom(q, a, b) for q in d.premises),
        None if d.principal is None else f(d.principal),
        atom,
    )


def rename_derivation(d: Derivation, r: Mapping[Atom, Atom]) -> Derivation:
    """Apply the atom-for-atom map ``r`` simultaneously to the whole derivation."""
    r = {a: b for a, b in r.items() if a != b}
    for a, b in r.items():
        if a.level != b.level:
            raise LevelMismatch(f"cannot rename {a} to {b}")
    if not r:
        return d
    used = derivation_atoms(d) | set(r) | set(r.values())
    temps = {}
    for a in sorted(r):
        t = fresh(a.level, used)
        used |= {t}
        temps[a] = t
    for a in sorted(r):
        d = _subst_atom(d, a, temps[a])
    for a in sorted(r):
        d = _subst_atom(d, temps[a], r[a])
    return d


def weaken(d: Derivation, left: Iterable[Pred] = (), right: Iterable[Pred] = ()) -> Derivation:
    """Add formulas to every sequent of ``d``; eigen-atoms are renamed out of their way."""
    extra_l = frozenset(left) - d.left
    extra_r = frozenset(right) - d.right
    if not extra_l and not extra_r:
        return d
    extra_supp = Sequent(extra_l, extra_r).support()

    def go(n):
        if n.rule == "AllR" and n.atom in extra_supp:
            n = _refresh_eigen(n, extra_supp)
        return Derivation(
            n.rule,
            Sequent(n.left | extra_l, n.right | extra_r),
            tuple(go(q) for q in n.premises),
            n.principal,
            n.atom,
        )

    return go(d)


def weaken_to(d: Derivation, target: Sequent) -> Derivation:
    if not (d.left <= target.left and d.right <= target.right):
        raise InvalidDerivation(f"cannot weaken {d.conclusion} to {target}")
    return weaken(d, target.left, target.right)


# cut elimination ---------------------------------------------------------------

class _Fuel:
    def __init__(self, n):
        self.left = n

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("cut elimination exceeded its step budget")


def _rebuild(d: Derivation, concl: Sequent, premises) -> Derivation:
    """Re-apply ``d``'s rule over a larger conclusion; premises are weakened to the kept form."""
    P = d.principal
    if d.rule == "AllR":
        q, = premises
        Y = open_at(P, d.atom)
        q = weaken_to(q, Sequent(concl.left, concl.right | {Y}))
        return Derivation("AllR", concl, (q,), P, d.atom)
    shapes = []
    if d.rule == "AndL":
        shapes = [Sequent(concl.left | set(P.args), concl.right)]
    elif d.rule == "NegL":
        shapes = [Sequent(concl.left, concl.right | {P.body})]
    elif d.rule == "NegR":
        shapes = [Sequent(concl.left | {P.body}, concl.right)]
    elif d.rule == "AllL":
        shapes = [Sequent(concl.left | {instantiate(P, d.atom)}, concl.right)]
    if d.rule == "AndR":
        out = []
        for old, q in zip(d.premises, premises):
            Y = next(Y for Y in P.args if _either(old.right, d.right, P, [Y]))
            out.append(weaken_to(q, Sequent(concl.left, concl.right | {Y})))
        return Derivation("AndR", concl, tuple(out), P)
    return Derivation(d.rule, concl, tuple(weaken_to(q, s) for q, s in zip(premises, shapes)), P, d.atom)


def _avoid_eigen(d: Derivation, avoid: frozenset) -> Derivation:
    if d.rule == "AllR" and d.atom in avoid:
        return _refresh_eigen(d, avoid)
    return d


def _cut(X: Pred, A: Derivation, B: Derivation, fuel: _Fuel) -> Derivation:
    """Cut-free derivation of ``A.left + (B.left - X) |- (A.right - X) + B.right``.

    ``A`` has ``X`` on the right, ``B`` has it on the left; both are cut-free.
    """
    fuel.spend()
    target = Sequent(A.left | (B.left - {X}), (A.right - {X}) | B.right)
    if X in A.left:
        return weaken_to(B, target)
    if X in B.right:
        return weaken_to(A, target)
    shared = target.left & target.right
    if shared:
        return Derivation("Ax", target, (), min(shared))
    outside = target.support()

    # X is not principal in A: push the cut into A's premises
    if not (A.rule.endswith("R") and A.principal == X):
        A = _avoid_eigen(A, outside)
        prem = [_cut(X, q, B, fuel) if X in q.right else q for q in A.premises]
        return _rebuild(A, target, prem)
    if not (B.rule.endswith("L") and B.principal == X):
        B = _avoid_eigen(B, outside)
        prem = [_cut(X, A, q, fuel) if X in q.left else q for q in B.premises]
        return _rebuild(B, target, prem)

    # principal on both sides; first remove X where a premise kept it
    A = _avoid_eigen(A, outside | derivation_atoms(B))
    A_prem = [_cut(X, q, B, fuel) if X in q.right else q for q in A.premises]
    B_prem = [_cut(X, A, q, fuel) if X in q.left else q for q in B.premises]
    if isinstance(X, And):
        D = B_prem[0]
        for Y in X.args:
            if Y not in D.left:
                continue
            AY = next(q for q in A_prem if Y in q.right)
            D = _cut(Y, AY, D, fuel)
        return weaken_to(D, target)
    if isinstance(X, Neg):
        return weaken_to(_cut(X.body, B_prem[0], A_prem[0], fuel), target)
    if isinstance(X, All):
        w, e = B.atom, A.atom
        A1 = rename_derivation(A_prem[0], {e: w})
        return weaken_to(_cut(instantiate(X, w), A1, B_prem[0], fuel), target)
    raise InvalidDerivation(f"unexpected principal pair on {show(X)}")


DEFAULT_CUT_FUEL = 10**7


def eliminate_cut(d: Derivation, fuel: int = DEFAULT_CUT_FUEL) -> Derivation:
    diag = []
    if not check_derivation(d, diag):
        raise InvalidDerivation("; ".join(diag))
    budget = _Fuel(fuel)

    def go(n):
        if not n.has_cut():
            return n
        prem = tuple(go(q) for q in n.premises)
        if n.rule == "Cut":
            left_p, right_p = prem  # Γ,X ⊢ Δ and Γ ⊢ X,Δ
            return weaken_to(_cut(n.principal, right_p, left_p, budget), n.conclusion)
        return Derivation(n.rule, n.conclusion, prem, n.principal, n.atom)

    return go(d)


# bounded proof search ----------------------------------------------------------

def _decompose(s: Sequent):
    """Pick an invertible step: ``(rule, principal, [premise sequents], atom)`` or ``None``."""
    for X in sorted(s.left):
        if isinstance(X, And):
            return "AndL", X, [Sequent((s.left - {X}) | set(X.args), s.right)], None
        if isinstance(X, Neg):
            return "NegL", X, [Sequent(s.left - {X}, s.right | {X.body})], None
    for X in sorted(s.right):
        if isinstance(X, And):
            return "AndR", X, [Sequent(s.left, (s.right - {X}) | {Y}) for Y in X.args], None
        if isinstance(X, Neg):
            return "NegR", X, [Sequent(s.left | {X.body}, s.right - {X})], None
        if isinstance(X, All):
            e = fresh(X.binder.level, s.support() | {X.binder})
            Y = open_at(X, e)
            return "AllR", X, [Sequent(s.left, (s.right - {X}) | {Y})], e
    return None


def _close_by_instance(s: Sequent) -> Derivation | None:
    """``AllL`` then ``Ax`` when some instance of a left quantifier is already on the right."""
    for X in sorted(x for x in s.left if isinstance(x, All)):
        lvl = X.binder.level
        pool = sorted(a for a in s.support() if a.level == lvl) or [fresh(lvl, s.support())]
        for w in pool:
            inst = instantiate(X, w)
            if inst in s.right:
                top = Sequent(s.left | {inst}, s.right)
                return Derivation("AllL", s, (Derivation("Ax", top, (), inst),), X, w)
    return None


def prove_bounded(s: Sequent, depth: int, fuel: int = 200000) -> Derivation | None:
    """Cut-free backward search; ``depth`` bounds how deeply ``AllL`` steps may nest.

    Invertible rules are applied eagerly.  Each ``AllL`` keeps its principal
    formula and instantiates it at a free atom of the sequent or at one fresh
    atom.  ``None`` means nothing was found within the bound.
    """
    budget = [fuel]

    def search(s: Sequent, k: int) -> Derivation | None:
        budget[0] -= 1
        if budget[0] < 0:
            return None
        shared = s.left & s.right
        if shared:
            return Derivation("Ax", s, (), min(shared))
        if k > 0:
            closed = _close_by_instance(s)
            if closed is not None:
                return closed
        step = _decompose(s)
        if step is not None:
            rule, X, prems, atom = step
            subs = []
            for q in prems:
                sub = search(q, k)
                if sub is None:
                    return None
                subs.append(sub)
            return Derivation(rule, s, tuple(subs), X, atom)
        if k == 0:
            return None
        supp = s.support()
        for X in sorted(x for x in s.left if isinstance(x, All)):
            lvl = X.binder.level
            pool = sorted(a for a in supp if a.level == lvl)
            pool.append(fresh(lvl, supp))
            for w in pool:
                inst = instantiate(X, w)
                if inst in s.left:
                    continue
                sub = search(Sequent(s.left | {inst}, s.right), k - 1)
                if sub is not None:
                    return Derivation("AllL", s, (sub,), X, w)
        return None

    return search(s, depth)


# text format -------------------------------------------------------------------

def format_derivation(d: Derivation, indent: int = 0) -> str:
    tag = d.rule
    if d.rule == "AllL":
        tag += f" w={d.atom}"
    elif d.rule == "AllR":
        tag += f" e={d.atom}"
    line = f"{'  ' * indent}{tag} | {show(d.principal)} :: {d.conclusion}"
    return "\n".join([line] + [format_derivation(q, indent + 1) for q in d.premises])


def parse_derivation(text: str) -> Derivation:
    from .syntax import Parser

    rows = []
    for raw in text.splitlines():
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        ind = len(raw) - len(raw.lstrip(" "))
        if ind % 2:
            raise ParseError("indentation must be a multiple of two spaces", raw, ind)
        head, sep, rest = raw.strip().partition("|")
        if not sep:
            raise ParseError("expected 'RULE | principal :: sequent'", raw, 0)
        parts = head.split()
        rule, atom = parts[0] if parts else "", None
        if rule not in RULES:
            raise ParseError(f"unknown rule {rule!r}", raw, ind)
        for extra in parts[1:]:
            k, _, v = extra.partition("=")
            if k not in ("w", "e"):
                raise ParseError(f"unknown annotation {extra!r}", raw, ind)
            p = Parser(v)
            atom = p.atom()
            p.done()
        p = Parser(rest)
        principal = p.pred()
        p.expect("::")
        left, right = p.sequent()
        p.done()
        rows.append((ind // 2, rule, atom, principal, Sequent.of(left, right)))
    if not rows:
        raise ParseError("empty derivation", text, 0)

    pos = 0

    def build(level):
        nonlocal pos
        lv, rule, atom, principal, seq = rows[pos]
        if lv != level:
            raise ParseError(f"unexpected indentation at rule {pos + 1}", text, 0)
        pos += 1
        kids = []
        while pos < len(rows) and rows[pos][0] > level:
            kids.append(build(level + 1))
        return Derivation(rule, seq, tuple(kids), principal, atom)

    d = build(0)
    if pos != len(rows):
        raise ParseError("more than one root rule", text, 0)
    return d
