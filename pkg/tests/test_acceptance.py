"""Acceptance criteria, one test each.

Every criterion also records a one-line PASS/FAIL verdict; ``conftest.py``
prints the collected lines at the end of the pytest run, and running this
file as a script prints them directly.
"""

from __future__ import annotations

import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from freejacobi.exact import HalfIntegerParams
from freejacobi.mc_sim import MCConfig, estimate_moments
from freejacobi.moments import finite_moment
from freejacobi.verify import run_suite

VERDICTS: dict[int, str] = {}


def _record(number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = "") -> bool:
    ok = ok and elapsed < limit
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title} ({elapsed:.1f}s, limit {limit:.0f}s)"
    if detail:
        line += f": {detail}"
    VERDICTS[number] = line
    print(line)
    return ok


def _suite_criterion(number: int, title: str, suites: list[str], limit: float) -> tuple[bool, str]:
    start = time.perf_counter()
    reports = [run_suite(s) for s in suites]
    elapsed = time.perf_counter() - start
    ok = all(r.passed for r in reports)
    detail = "; ".join(f"{r.name} {r.cases - len(r.failures)}/{r.cases}" for r in reports)
    failures = [f for r in reports for f in r.failures]
    if failures:
        detail += f"; first failure {failures[0]}"
    return _record(number, title, ok, elapsed, limit, detail), detail


def criterion_1():
    return _suite_criterion(1, "c[n,h,h-1] at lambda=1 equals (1-theta)^n theta^(n-1) C(2n,n-h), n<=8",
                            ["closed-form"], 60)


def criterion_2():
    return _suite_criterion(2, "lambda=1, theta=1/2 table equals the Catalan-triangle closed form, n<=8",
                            ["catalan"], 120)


def criterion_3():
    return _suite_criterion(3, "limit moments at (1, 1/2) equal the arcsine + Laguerre form, n<=8",
                            ["arcsine-case"], 60)


def criterion_4():
    return _suite_criterion(4, "division = symmetric = recurrence (and special cases), n<=5, 6 pairs",
                            ["routes"], 300)


def criterion_5():
    return _suite_criterion(5, "alternating double sums of non-surviving quotient terms vanish, n<=5",
                            ["cancellation"], 120)


def criterion_6():
    return _suite_criterion(6, "Carlitz, Chu and Gauss identities hold exactly",
                            ["carlitz", "chu", "gauss"], 60)


def criterion_7():
    return _suite_criterion(7, "halving-error ratio in [0.3, 0.7] at (1, 1/2), n<=3, d in {24,48,96}",
                            ["convergence"], 120)


def criterion_8():
    start = time.perf_counter()
    report = run_suite("half-shift")
    passing = report.notes.get("passing_resolutions")
    detail = f"passing resolution(s) {passing}"
    return _record(8, "p=m+1/2, d=2m closed form matches finite moments under one reading",
                   report.passed, time.perf_counter() - start, 60, detail), detail


def criterion_9():
    start = time.perf_counter()
    cfg = MCConfig(d=16, m=8, p=8, t=1.0, steps=400, samples=10_000, seed=2024, streams=4)
    with ThreadPoolExecutor(4) as ex:
        res = estimate_moments(cfg, 2, executor=ex)
    exact1 = 0.5 + 0.5 * math.exp(-1)
    exact2 = finite_moment(2, HalfIntegerParams(8, 8, 16))(1.0) / 8
    err1, err2 = abs(res.mean[1] - exact1), abs(res.mean[2] - exact2)
    ok = err1 <= 3 * res.stderr[1] + 0.02 and err2 <= 3 * res.stderr[2] + 0.05
    detail = (f"n=1 {res.mean[1]:.5f}+-{res.stderr[1]:.5f} vs {exact1:.5f}; "
              f"n=2 {res.mean[2]:.5f}+-{res.stderr[2]:.5f} vs {exact2:.5f}")
    return _record(9, "Monte Carlo moments match exact finite-size values", ok,
                   time.perf_counter() - start, 300, detail), detail


def criterion_10():
    return _suite_criterion(10, "inner sum within 2/m relative error of L_{h-1}^(1)(ht)/h, h<=4, t=1",
                            ["laguerre-limit"], 60)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(number):
    ok, detail = CRITERIA[number - 1]()
    assert ok, detail


if __name__ == "__main__":
    results = [c()[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
