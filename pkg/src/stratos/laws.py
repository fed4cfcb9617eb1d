"""Randomised law suites over the kernel, driven by a seed.

Each suite returns ``LawReport`` rows; a row fails on the first
counterexample and keeps it for the report.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from . import gen
from .atoms import Atom, fresh, swap
from .errors import NotStratifiable
from .models import amgis, numeral_body, numeral_witness, sat
from .sequent import (
    Derivation, Sequent, check_derivation, eliminate_cut, instantiate, prove_bounded,
)
from .sigma import SmallSubst, apply_small_subst, subst, subst_pred, subst_set
from .sugar import tin
from .surface import (
    In, SComp, Var, all_vars, infer_stratification, interp, interp_term, is_stratified, parse,
    plus, substitute, term_level, theta_interp,
)
from .syntax import generator
from .terms import (
    All, And, Atm, BOT, Comp, Elt, Neg, TOP, concrete, empty, full, imp, measures, numeral,
    permute,
)
from .theories import (
    Theory, check_eq_derivation, conclusion, eqcent_bounded,
)


@dataclass
class LawReport:
    name: str
    checked: int = 0
    passed: int = 0
    skipped: int = 0
    counterexample: str | None = None
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.counterexample is None and self.checked > 0

    def record(self, holds: bool, show=lambda: ""):
        self.checked += 1
        if holds:
            self.passed += 1
        elif self.counterexample is None:
            self.counterexample = show()

    def line(self) -> str:
        status = "OK" if self.ok else "FAIL"
        extra = f" ({', '.join(self.notes)})" if self.notes else ""
        return f"{self.name:<22} {status:<4} {self.passed}/{self.checked}{extra}"


def _pick_atom(rng, Z, level=None, avoid=()):
    """Often an atom free in ``Z``, so substitutions have something to act on."""
    cands = [a for a in sorted(Z.support) if a not in avoid and (level is None or a.level == level)]
    if cands and rng.random() < 0.7:
        return rng.choice(cands)
    lv = rng.randint(gen.LO, gen.HI) if level is None else level
    for _ in range(50):
        a = gen.atom(rng, lv, gen.N_INDICES + 2)
        if a not in avoid:
            return a
    return fresh(lv, set(avoid))


def _fresh_for(rng, level, avoid):
    """A random atom at ``level`` outside ``avoid``."""
    pool = [Atom(level, k) for k in range(gen.N_INDICES + 3) if Atom(level, k) not in avoid]
    return rng.choice(pool) if pool else fresh(level, set(avoid))


def _timed(fn):
    def run(n, seed, **kw):
        t0 = time.perf_counter()
        reports = fn(n, seed, **kw)
        dt = time.perf_counter() - t0
        for r in reports:
            r.seconds = dt
        return reports
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# sigma --------------------------------------------------------------------------

@_timed
def sigma_suite(n: int = 1000, seed: int = 0) -> list[LawReport]:
    """The eight algebraic laws of the sigma-action."""
    rng = random.Random(seed)
    names = ["sigma-alpha", "sigma-fresh", "sigma-sigma", "sigma-swap",
             "sigma-assoc", "sigma-id", "sigma-ren", "sigma-at"]
    reps = {k: LawReport(k) for k in names}

    for _ in range(n):
        Z = gen.term(rng)

        b = _pick_atom(rng, Z)
        y = gen.sized_set(rng, b.level, 4)
        b2 = _fresh_for(rng, b.level, Z.support | {b})
        lhs, rhs = subst(Z, b, y), subst(permute(swap(b2, b), Z), b2, y)
        reps["sigma-alpha"].record(lhs == rhs, lambda: f"Z={Z} b={b} b'={b2} y={y}")

        bf = _fresh_for(rng, rng.randint(gen.LO, gen.HI), Z.support)
        yf = gen.sized_set(rng, bf.level, 4)
        reps["sigma-fresh"].record(subst(Z, bf, yf) == Z, lambda: f"Z={Z} b={bf} y={yf}")

        a = _pick_atom(rng, Z)
        b = _pick_atom(rng, Z, avoid={a})
        x = gen.sized_set(rng, a.level, 4)
        y = gen.fresh_set(rng, b.level, {a}, 4)
        lhs = subst(subst(Z, a, x), b, y)
        rhs = subst(subst(Z, b, y), a, subst_set(x, b, y))
        reps["sigma-sigma"].record(lhs == rhs, lambda: f"Z={Z} a={a} x={x} b={b} y={y}")

        x = gen.fresh_set(rng, a.level, {b}, 4)
        lhs = subst(subst(Z, a, x), b, y)
        rhs = subst(subst(Z, b, y), a, x)
        reps["sigma-swap"].record(lhs == rhs, lambda: f"Z={Z} a={a} x={x} b={b} y={y}")

        bz = _fresh_for(rng, b.level, Z.support | {a})
        x = gen.sized_set(rng, a.level, 4)
        y = gen.fresh_set(rng, bz.level, {a}, 4)
        lhs = subst(Z, a, subst_set(x, bz, y))
        rhs = subst(subst(Z, a, x), bz, y)
        reps["sigma-assoc"].record(lhs == rhs, lambda: f"Z={Z} a={a} x={x} b={bz} y={y}")

        reps["sigma-id"].record(subst(Z, a, Atm(a)) == Z, lambda: f"Z={Z} a={a}")

        a2 = _fresh_for(rng, a.level, Z.support | {a})
        reps["sigma-ren"].record(
            subst(Z, a, Atm(a2)) == permute(swap(a2, a), Z), lambda: f"Z={Z} a={a} a'={a2}")

        lv = rng.randint(gen.LO + 1, gen.HI)
        z = gen.sized_set(rng, lv, 8)
        if not isinstance(z, Comp):
            z = Comp(gen.atom(rng, lv - 1), gen.sized_pred(rng, 7))
        a = _pick_atom(rng, z)
        x = gen.sized_set(rng, a.level, 4)
        c = _fresh_for(rng, lv - 1, z.support | x.support | {a})
        lhs = subst_pred(concrete(z, c), a, x)
        rhs = concrete(subst_set(z, a, x), c)
        reps["sigma-at"].record(lhs == rhs, lambda: f"z={z} c={c} a={a} x={x}")

    return [reps[k] for k in names]


@_timed
def wd_suite(n: int = 1000, seed: int = 0, binder_checks: int = 200) -> list[LawReport]:
    """Support and minimum-level bounds; independence of the fresh binder."""
    rng = random.Random(seed)
    supp, lev, alpha = LawReport("support-bound"), LawReport("minlev-bound"), LawReport("binder-independence")
    for _ in range(n):
        Z = gen.term(rng)
        a = _pick_atom(rng, Z)
        x = gen.sized_set(rng, a.level, 4)
        R = subst(Z, a, x)
        supp.record(R.support <= (Z.support - {a}) | x.support, lambda: f"Z={Z} a={a} x={x}")
        lo = min(measures(Z)[1], a.level, measures(x)[1])
        lev.record(measures(R)[1] >= lo, lambda: f"Z={Z} a={a} x={x}")
    for _ in range(binder_checks):
        a = Atom(rng.randint(gen.LO + 1, gen.HI), rng.randrange(gen.N_INDICES))
        X = gen.sized_pred(rng, 6)
        a1 = gen.atom(rng, a.level - 1)
        x1 = Comp(a1, X)
        a2 = _fresh_for(rng, a1.level, X.support | {a1})
        x2 = Comp(a2, permute(swap(a2, a1), X))
        Z = gen.sized_pred(rng, 6)
        Z = And((Z, Elt(gen.sized_set(rng, a.level - 1, 4), a)))
        alpha.record(subst_pred(Z, a, x1) == subst_pred(Z, a, x2),
                     lambda: f"Z={Z} a={a} x={x1} x'={x2}")
    return [supp, lev, alpha]


# models ---------------------------------------------------------------------------

@_timed
def duality_suite(n: int = 500, seed: int = 0, multi: int = 200) -> list[LawReport]:
    """Substitution on the formula agrees with amgis on the prepoint."""
    rng = random.Random(seed)
    single, many = LawReport("amgis-duality"), LawReport("amgis-duality-multi")
    truths = 0
    while single.checked < n:
        p = gen.prepoint(rng)
        X = gen.sized_pred(rng, 8)
        if measures(X)[0] > 5:
            single.skipped += 1
            continue
        a = _pick_atom(rng, X)
        x = gen.sized_set(rng, a.level, 4)
        lhs = sat(p, subst_pred(X, a, x))
        truths += lhs
        single.record(lhs == sat(amgis(p, x, a), X), lambda: f"p={p!s} X={X} a={a} x={x}")
    single.notes.append(f"{truths} true")
    for _ in range(multi):
        p = gen.prepoint(rng)
        X = gen.sized_pred(rng, 8)
        dom = sorted(X.support)[:3] or [gen.atom(rng, 0)]
        entries = {}
        for d in dom:
            entries[d] = gen.fresh_set(rng, d.level, set(dom), 4)
        s = SmallSubst(tuple(entries.items()))
        many.record(sat(p, apply_small_subst(X, s)) == sat(p.push(s), X),
                    lambda: f"p={p!s} X={X} sigma={s}")
    return [single, many]


@_timed
def constants_suite(n: int = 100, seed: int = 0) -> list[LawReport]:
    rng = random.Random(seed)
    rows = [LawReport(k) for k in ("bot-false", "top-true", "empty-has-none", "full-has-all")]
    for _ in range(n):
        p = gen.prepoint(rng)
        i = rng.randint(gen.LO + 1, gen.HI)
        y = gen.sized_set(rng, i - 1, 6)
        rows[0].record(not sat(p, BOT), lambda: f"p={p!s}")
        rows[1].record(sat(p, TOP), lambda: f"p={p!s}")
        rows[2].record(not sat(p, tin(y, empty(i))), lambda: f"p={p!s} y={y}")
        rows[3].record(sat(p, tin(y, full(i))), lambda: f"p={p!s} y={y}")
    return rows


# surface ----------------------------------------------------------------------------

@_timed
def interp_suite(n: int = 300, seed: int = 0) -> list[LawReport]:
    """Interpretation commutes with substitution; comprehension; level soundness."""
    rng = random.Random(seed)
    sub, comp, lev = LawReport("interp-substitution"), LawReport("comprehension"), LawReport("level-soundness")

    def levels_ok(x):
        ok = True
        for v in all_vars(x):
            ok &= interp_term(v).level == term_level(v)
        return ok

    for _ in range(n):
        phi = gen.surface_formula(rng, 3)
        vs = sorted(all_vars(phi), key=lambda v: (v.level, v.name))
        b = rng.choice(vs) if vs and rng.random() < 0.8 else Var("b", rng.randint(1, 4))
        t = gen.surface_term(rng, b.level, 2, [])
        lhs = subst(interp(phi), b.atom, interp_term(t))
        rhs = interp(substitute(phi, b, t))
        sub.record(lhs == rhs, lambda: f"phi={phi} b={b} t={t}")
        lev.record(levels_ok(phi) and interp_term(t).level == term_level(t), lambda: f"phi={phi} t={t}")
    for _ in range(n):
        a = Var(rng.choice("abcd"), rng.randint(1, 3))
        phi = gen.surface_formula(rng, 3, [a])
        s = gen.surface_term(rng, a.level, 2, [])
        lhs = interp(In(s, SComp(a, phi)))
        rhs = interp(substitute(phi, a, s))
        comp.record(lhs == rhs, lambda: f"s={s} a={a} phi={phi}")
    return [sub, comp, lev]


@_timed
def ta_suite(n: int = 100, seed: int = 0) -> list[LawReport]:
    """The shift of a closed formula's meaning is the meaning of its lift."""
    rng = random.Random(seed)
    rep = LawReport("typical-ambiguity")
    for _ in range(n):
        phi = gen.closed_surface_formula(rng, 3)
        rep.record(theta_interp(phi) == interp(plus(phi)), lambda: f"phi={phi}")
    return [rep]


def stratification_suite(n: int = 0, seed: int = 0) -> list[LawReport]:
    t0 = time.perf_counter()
    acc, rej, cyc = LawReport("stratified-accepted"), LawReport("unstratified-rejected"), LawReport("cycle-detected")
    for s in ("a@2 in b@3", "b@3 in c@4", "a@2 = a@2"):
        acc.record(is_stratified(parse(s)), lambda s=s: s)
    for s in ("a@2 in c@4", "b@3 in a@2", "a@2 in a@2", "a@2 = b@3"):
        rej.record(not is_stratified(parse(s)), lambda s=s: s)
    try:
        infer_stratification(parse("a in a"))
        cyc.record(False, lambda: "a in a was assigned levels")
    except NotStratifiable:
        cyc.record(True)
    for r in (acc, rej, cyc):
        r.seconds = time.perf_counter() - t0
    return [acc, rej, cyc]


# sequents ---------------------------------------------------------------------------

def signature_formulas() -> list:
    """Small formulas over two generators and two atoms at level 1."""
    X, Y = generator("X"), generator("Y")
    a, b, c = Atom(1, 0), Atom(1, 1), Atom(0, 2)
    Pa, Pb = Elt(Atm(c), a), Elt(Atm(c), b)
    return [X, Y, Neg(X), And((X, Y)), imp(X, Y), Pa, Pb, All(a, Pa), All(a, imp(X, Pa)),
            Neg(All(b, Pb)), BOT, TOP]


@_timed
def sequent_suite(n: int = 100, seed: int = 0, depth: int = 4) -> list[LawReport]:
    rng = random.Random(seed)
    ax, elim, ks, cut, nobot = (LawReport("axiom"), LawReport("forall-elim"), LawReport("K-and-S"),
                                LawReport("cut-elimination"), LawReport("bot-unprovable"))
    for _ in range(n):
        X = gen.sized_pred(rng, 5)
        G = {gen.sized_pred(rng, 4) for _ in range(rng.randint(0, 2))}
        D = {gen.sized_pred(rng, 4) for _ in range(rng.randint(0, 2))}
        d = Derivation("Ax", Sequent.of(G | {X}, D | {X}), (), X)
        ax.record(check_derivation(d), lambda: str(d.conclusion))

        a = Atom(rng.randint(gen.LO, gen.HI), rng.randrange(gen.N_INDICES))
        body = gen.sized_pred(rng, 5)
        P = All(a, body)
        w = _pick_atom(rng, body, a.level)
        inst = instantiate(P, w)
        top = Sequent.of(G | {P}, D | {inst})
        d = Derivation("AllL", top, (Derivation("Ax", Sequent(top.left | {inst}, top.right), (), inst),), P, w)
        elim.record(check_derivation(d), lambda: str(top))

        X, Y, Z = (gen.sized_pred(rng, 3) for _ in range(3))
        for goal in (imp(X, imp(Y, X)), imp(imp(X, imp(Y, Z)), imp(imp(X, Y), imp(X, Z)))):
            s = Sequent.of((), [goal])
            found = prove_bounded(s, depth)
            ks.record(found is not None and check_derivation(found), lambda: str(s))

    forms = signature_formulas()
    seqs = [Sequent.of(L, R) for L in itertools.combinations(forms, 1) for R in itertools.combinations(forms, 1)]
    seqs += [Sequent.of((), [F]) for F in forms]
    proofs = {}
    for s in seqs:
        d = prove_bounded(s, depth)
        if d is not None:
            proofs[s] = d
            e = eliminate_cut(d)
            cut.record(check_derivation(e) and not e.has_cut() and e.conclusion == s, lambda: str(s))
    built = 0
    for s in seqs:
        for C in forms:
            a = prove_bounded(Sequent(s.left | {C}, s.right), depth)
            b = prove_bounded(Sequent(s.left, s.right | {C}), depth)
            if a is None or b is None:
                continue
            d = Derivation("Cut", s, (a, b), C)
            e = eliminate_cut(d)
            cut.record(check_derivation(e) and not e.has_cut() and e.conclusion == s,
                       lambda: f"cut {C} in {s}")
            built += 1
    cut.notes.append(f"{len(proofs)} searched, {built} with cut")
    nobot.record(prove_bounded(Sequent.of((), [BOT]), 6) is None, lambda: "found a proof of bot")
    return [ax, elim, ks, cut, nobot]


# theories ---------------------------------------------------------------------------

def _holed_context(rng, u, a: Atom):
    """A random set mentioning ``a`` only where plugging ``u`` back is syntactic."""
    lv = rng.randint(a.level, min(a.level + 2, gen.HI))
    for _ in range(100):
        z = gen.sized_set(rng, lv, 6)
        if isinstance(u, Comp):
            # keep a out of elt-target position so z[a:=u] still contains u
            def targets(t):
                if isinstance(t, Elt):
                    return {t.target} | targets(t.body)
                if isinstance(t, (Neg, All, Comp)):
                    return targets(t.body)
                if isinstance(t, And):
                    return set().union(*(targets(x) for x in t.args))
                return set()
            if a in targets(z):
                continue
        if a in z.support:
            return z
    return Atm(a) if lv == a.level else None


@_timed
def theories_suite(n: int = 100, seed: int = 0, depth: int = 2) -> list[LawReport]:
    rng = random.Random(seed)
    cong, empty_r, barrier = LawReport("congruence-step"), LawReport("empty-vs-full"), LawReport("freshness-barrier")
    while cong.checked < n:
        lv = rng.randint(gen.LO + 1, gen.HI - 1)
        u, u2 = gen.sized_set(rng, lv, 4), gen.sized_set(rng, lv, 4)
        a = Atom(lv, gen.N_INDICES + 1)
        z = _holed_context(rng, u, a)
        if z is None:
            cong.skipped += 1
            continue
        T = Theory(((u, u2),))
        lhs, rhs = subst_set(z, a, u), subst_set(z, a, u2)
        r = eqcent_bounded(T, lhs, rhs, 1)
        cong.record(bool(r) and check_eq_derivation(T, r.cert) and conclusion(T, r.cert) == (lhs, rhs),
                    lambda: f"u={u} u'={u2} z={z} a={a}")
    for d in range(6):
        r = eqcent_bounded(Theory(()), empty(0), full(0), d)
        empty_r.record(not r, lambda: f"derived at depth {d}")
    for _ in range(n):
        pairs = []
        for _ in range(rng.randint(1, 2)):
            lv = rng.randint(0, 2)
            pairs.append((gen.sized_set(rng, lv, 3), gen.sized_set(rng, lv, 3)))
        T = Theory(tuple(pairs))
        lv = rng.randint(0, 2)
        a = Atom(lv, gen.N_INDICES + 2)     # outside every generated support
        x = gen.sized_set(rng, lv, 4)
        r = eqcent_bounded(T, Atm(a), x, depth)
        barrier.record(not r, lambda: f"T={T!s} derives atm({a}) == {x}")
    return [cong, empty_r, barrier]


# numerals ---------------------------------------------------------------------------

@_timed
def numerals_suite(n: int = 3, seed: int = 0, level: int = 6) -> list[LawReport]:
    sep, same = LawReport("numerals-separated"), LawReport("numerals-self-agree")
    witnesses = []
    for lo_, hi_ in itertools.combinations(range(n + 1), 2):
        p, c = numeral_witness(lo_, hi_, level)
        witnesses.append((p, c))
        v1 = sat(p, numeral_body(lo_, level, c))
        v2 = sat(p, numeral_body(hi_, level, c))
        sep.record(v1 != v2, lambda: f"{lo_} vs {hi_}: both {v1}")
    rng = random.Random(seed)
    for k in range(n + 1):
        num = numeral(k, level)
        # an alpha-variant built from renamed binders
        other = num
        for _ in range(3):
            lv = rng.randint(level - 2 * k - 1, level - 1)
            b1 = Atom(lv, rng.randrange(6))
            b2 = Atom(lv, rng.randrange(6))
            if b1 != b2 and not ({b1, b2} & num.support):
                other = permute(swap(b1, b2), other)
        agree = all(sat(p, concrete(num, c)) == sat(p, concrete(other, c)) for p, c in witnesses)
        same.record(agree, lambda: f"numeral {k}")
    return [sep, same]


SUITES = {
    "sigma": sigma_suite,
    "wd": wd_suite,
    "duality": duality_suite,
    "constants": constants_suite,
    "interp": interp_suite,
    "ta": ta_suite,
    "stratification": stratification_suite,
    "sequent": sequent_suite,
    "theories": theories_suite,
    "numerals": numerals_suite,
}

DEFAULT_N = {
    "sigma": 1000, "wd": 1000, "duality": 500, "constants": 100, "interp": 300,
    "ta": 100, "stratification": 0, "sequent": 100, "theories": 100, "numerals": 3,
}


def run_suite(name: str, n: int | None = None, seed: int = 0) -> list[LawReport]:
    fn = SUITES[name]
    return fn(DEFAULT_N[name] if n is None else n, seed)
