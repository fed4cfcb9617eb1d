"""Acceptance criteria 1-10, each at its stated counts and time limits.

Each criterion prints one PASS/FAIL line.  Run directly with
``python tests/test_acceptance.py`` for just those lines.
"""

import sys
import time

import pytest

from stratos import laws

SEED = 7


def _verdict(number, title, reports, need, limit=None):
    """``need`` maps report name -> minimum number of checked instances."""
    t0 = time.perf_counter()
    reports = reports()
    dt = time.perf_counter() - t0
    by_name = {r.name: r for r in reports}
    problems = []
    for name, k in need.items():
        r = by_name.get(name)
        if r is None:
            problems.append(f"{name} missing")
        elif not r.ok:
            problems.append(f"{name}: {r.counterexample or 'nothing checked'}")
        elif r.checked < k:
            problems.append(f"{name}: only {r.checked} < {k} instances")
    if limit is not None and dt >= limit:
        problems.append(f"took {dt:.1f}s, limit {limit}s")
    counts = ", ".join(f"{r.name} {r.passed}/{r.checked}" for r in reports)
    status = "PASS" if not problems else "FAIL"
    line = f"criterion {number:>2} {status}  {title} [{dt:.1f}s] {counts}"
    if problems:
        line += "  <- " + "; ".join(problems)
    return not problems, line


def c1():
    names = ["sigma-alpha", "sigma-fresh", "sigma-sigma", "sigma-swap",
             "sigma-assoc", "sigma-id", "sigma-ren", "sigma-at"]
    return _verdict(1, "sigma laws", lambda: laws.sigma_suite(1000, SEED),
                    {k: 1000 for k in names}, limit=60)


def c2():
    return _verdict(2, "well-definedness", lambda: laws.wd_suite(1000, SEED, binder_checks=200),
                    {"support-bound": 1000, "minlev-bound": 1000, "binder-independence": 200})


def c3():
    return _verdict(3, "amgis duality", lambda: laws.duality_suite(500, SEED, multi=200),
                    {"amgis-duality": 500, "amgis-duality-multi": 200})


def c4():
    return _verdict(4, "semantic constants", lambda: laws.constants_suite(100, SEED),
                    {k: 100 for k in ("bot-false", "top-true", "empty-has-none", "full-has-all")})


def c5():
    return _verdict(5, "interpretation laws", lambda: laws.interp_suite(300, SEED),
                    {"interp-substitution": 300, "comprehension": 300, "level-soundness": 1})


def c6():
    return _verdict(6, "typical ambiguity", lambda: laws.ta_suite(100, SEED), {"typical-ambiguity": 100})


def c7():
    return _verdict(7, "stratification example", lambda: laws.stratification_suite(0, SEED),
                    {"stratified-accepted": 3, "unstratified-rejected": 4, "cycle-detected": 1})


def c8():
    return _verdict(8, "sequent calculus", lambda: laws.sequent_suite(100, SEED, depth=4),
                    {"axiom": 1, "forall-elim": 1, "K-and-S": 2, "cut-elimination": 1, "bot-unprovable": 1})


def c9():
    return _verdict(9, "equality theories", lambda: laws.theories_suite(100, SEED),
                    {"congruence-step": 1, "empty-vs-full": 6, "freshness-barrier": 100})


def c10():
    return _verdict(10, "numerals", lambda: laws.numerals_suite(3, SEED, level=6),
                    {"numerals-separated": 6, "numerals-self-agree": 4}, limit=30)


CRITERIA = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(criterion, capsys):
    ok, line = criterion()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
