"""Batch command-line front end.

Exit codes: 0 for success or a true answer, 1 for a false answer or nothing
found within the bound, 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import laws
from .errors import NotStratifiable, NotStratified, StratosError
from .models import parse_prepoint, sat
from .sequent import (
    Sequent, check_derivation, eliminate_cut, format_derivation, parse_derivation, prove_bounded,
)
from .sigma import apply_small_subst
from .surface import check_stratified, infer_stratification, interp, interp_term, parse, to_tree
from .syntax import Parser, parse_pred, parse_sequent, parse_subst_expr
from .terms import show
from .theories import (
    Tri, check_eq_derivation, eqcent_bounded, herbrand_sat, parse_theory, show_cert,
)

OK, FALSE, BAD = 0, 1, 2

VERBS = ("check", "infer", "interp", "subst", "sat", "prove", "checkproof", "cutfree", "theory", "laws")


class _Args(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(message)


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = _Args(prog="stratos", description="Stratified set theory toolkit.", allow_abbrev=False)
    ap.add_argument("verb", choices=VERBS)
    ap.add_argument("--expr", help="inline input")
    ap.add_argument("--file", help="input file (model, theory or derivation, or one formula per line)")
    ap.add_argument("--depth", type=int, default=3, help="search bound")
    ap.add_argument("--n", type=int, help="instances per law")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--suite", choices=sorted(laws.SUITES), help="law suite (default: all)")
    ap.add_argument("--tst", action="store_true", help="require levels >= 1")
    ap.add_argument("--anchor", type=int, default=1, help="lowest level for inferred components")
    ap.add_argument("--format", choices=("text", "tree"), default="text")
    return ap


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}")


def _lines(args) -> list[str]:
    """Inline expression, or the non-blank, non-comment lines of ``--file``."""
    if args.expr is not None:
        return [args.expr]
    if args.file is None:
        raise _Usage(f"{args.verb} needs --expr or --file")
    return [ln.strip() for ln in _read(args.file).splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise _Usage(f"{args.verb} needs --{name}")


def _emit(out, args, x, text=None):
    if args.format == "tree":
        out.append(json.dumps(to_tree(x)))
    else:
        out.append(text if text is not None else str(x))


# verbs ---------------------------------------------------------------------------

def _check(args, out):
    code = OK
    for line in _lines(args):
        try:
            check_stratified(parse(line), args.tst)
            out.append("stratified")
        except NotStratified as e:
            out.append(f"not stratified: {e}")
            code = FALSE
    return code


def _infer(args, out):
    code = OK
    for line in _lines(args):
        try:
            la = infer_stratification(parse(line), args.anchor)
        except NotStratifiable as e:
            out.append(f"not stratifiable: {e}")
            code = FALSE
            continue
        _emit(out, args, la.formula, f"{la.formula}\n  {la}" if la.levels else str(la.formula))
    return code


def _interp(args, out):
    for line in _lines(args):
        x = parse(line)
        t = interp_term(x, args.tst) if not _is_formula(x) else interp(x, args.tst)
        _emit(out, args, t, show(t))
    return OK


def _is_formula(x) -> bool:
    from .surface import Bot, Eq, Forall, Imp, In
    return isinstance(x, (Bot, Eq, Forall, Imp, In))


def _subst(args, out):
    for line in _lines(args):
        t, blocks = parse_subst_expr(line)
        for s in blocks:
            t = apply_small_subst(t, s)
        _emit(out, args, t, show(t))
    return OK


def _sat(args, out):
    _need(args, "file", "expr")
    p = parse_prepoint(_read(args.file))
    v = sat(p, parse_pred(args.expr))
    out.append("true" if v else "false")
    return OK if v else FALSE


def _prove(args, out):
    _need(args, "expr")
    left, right = parse_sequent(args.expr)
    s = Sequent.of(left, right)
    d = prove_bounded(s, args.depth)
    if d is None:
        out.append(f"no derivation within depth {args.depth}")
        return FALSE
    if not check_derivation(d):
        raise StratosError("internal error: search produced a derivation the checker rejects")
    out.append(format_derivation(d))
    return OK


def _load_derivation(args):
    _need(args, "file")
    return parse_derivation(_read(args.file))


def _checkproof(args, out):
    d = _load_derivation(args)
    diag: list = []
    if check_derivation(d, diag):
        out.append(f"valid: {d.conclusion}")
        return OK
    out.append("invalid: " + "; ".join(str(x) for x in diag))
    return FALSE


def _cutfree(args, out):
    d = eliminate_cut(_load_derivation(args))
    if not check_derivation(d) or d.has_cut():
        raise StratosError("internal error: cut elimination produced an unchecked derivation")
    out.append(format_derivation(d))
    return OK


def _theory(args, out):
    _need(args, "file", "expr")
    T = parse_theory(_read(args.file))
    q = args.expr
    if "==" in q:
        p = Parser(q)
        u = p.set_()
        p.expect("==")
        v = p.set_()
        p.done()
        r = eqcent_bounded(T, u, v, args.depth)
        if not r:
            out.append(f"not derivable within depth {args.depth}" + (f": {r.reason}" if r.reason else ""))
            return FALSE
        if not check_eq_derivation(T, r.cert):
            raise StratosError("internal error: search produced a certificate the checker rejects")
        out.append("derivable")
        out.append(show_cert(T, r.cert))
        return OK
    v = herbrand_sat(T, parse_pred(q), args.depth)
    out.append(str(v))
    return OK if v is Tri.TRUE else FALSE


def _laws(args, out):
    names = [args.suite] if args.suite else list(laws.SUITES)
    code = OK
    for name in names:
        reports = laws.run_suite(name, args.n, args.seed)
        for r in reports:
            out.append(r.line())
        bad = [r for r in reports if not r.ok]
        if bad:
            code = FALSE
            for r in bad:
                if r.counterexample:
                    out.append(f"  counterexample for {r.name}: {r.counterexample}")
            n = args.n if args.n is not None else laws.DEFAULT_N[name]
            out.append(f"  seed {args.seed}; replay: stratos laws --suite {name} --n {n} --seed {args.seed}")
    return code


HANDLERS = {
    "check": _check, "infer": _infer, "interp": _interp, "subst": _subst, "sat": _sat,
    "prove": _prove, "checkproof": _checkproof, "cutfree": _cutfree, "theory": _theory, "laws": _laws,
}


def run(argv: list[str]) -> tuple[int, str]:
    """Run one command; returns the exit code and the report text."""
    out: list[str] = []
    try:
        args = build_parser().parse_args(argv)
        code = HANDLERS[args.verb](args, out)
    except _Usage as e:
        return BAD, f"error: {e}"
    except StratosError as e:
        return BAD, "\n".join(out + [f"error: {type(e).__name__}: {e}"])
    except RecursionError:
        return BAD, "error: input nests too deeply"
    return code, "\n".join(out)


def main(argv: list[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        print(text, file=sys.stderr if code == BAD else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
