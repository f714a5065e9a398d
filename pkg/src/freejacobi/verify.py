"""Named verification suites.

Each suite returns a :class:`SuiteReport` carrying the number of checked
cases and, for every failure, a dict with both sides of the comparison so a
counterexample can be printed as is.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .coefficients import (
    LimitParams,
    build_table,
    c_division,
    c_recurrence,
    c_closed_l_top,
    c_symmetric,
    c_toeplitz,
    alternating_double_sum,
    quotient_coeffs,
    theta_half_relation_check,
    x_recurrence,
)
from .errors import DomainError, PoleError
from .exact import HalfIntegerParams, format_rational
from .hypergeo import (
    HypSeries,
    carlitz_4F3,
    carlitz_admissible,
    chu_reduction_pair,
    evaluate_terminating,
    gauss_2F1_unity,
    termination_index,
)
from .moments import (
    ExpPoly,
    laguerre_inner_sum,
    laguerre_limit,
    half_shift_moment,
    HALF_SHIFT_RESOLUTIONS,
    finite_moment,
    finite_time_part,
    finite_time_part_hooks,
    limit_moment,
    limit_time_part,
    arcsine_case_moment,
)

__all__ = [
    "SuiteReport",
    "SUITES",
    "run_suite",
    "seeded_limit_params",
    "cancellation_sums",
    "convergence_errors",
    "half_shift_resolutions",
]

CARLITZ_M = (Fraction(3), Fraction(7, 2), Fraction(5), Fraction(13, 2))
ROUTE_SEED = 20240611
DRAW_SEED = 7


def _fmt(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, ExpPoly):
        return x.to_dict()
    return x


@dataclass
class SuiteReport:
    name: str
    cases: int = 0
    skipped: int = 0
    failures: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def check(self, ok: bool, **detail) -> None:
        self.cases += 1
        if not ok:
            self.failures.append({k: _fmt(v) for k, v in detail.items()})

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", {self.skipped} skipped" if self.skipped else ""
        return f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures{extra} ({self.elapsed:.1f}s)"

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "skipped": self.skipped,
            "failures": self.failures,
            "notes": self.notes,
            "elapsed": self.elapsed,
        }


def _random_rational(rng: random.Random, lo: int = -40, hi: int = 40, den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def seeded_limit_params(count: int = 6, seed: int = ROUTE_SEED) -> list[LimitParams]:
    """Reproducible ``(lambda, theta)`` pairs with small denominators."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        b = rng.randint(2, 9)
        lam = Fraction(rng.randint(1, b), b)
        b = rng.randint(2, 9)
        theta = Fraction(rng.randint(1, b - 1), b)
        p = LimitParams(lam, theta)
        if p not in out:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# hypergeometric identities
# ---------------------------------------------------------------------------

def suite_carlitz(report: SuiteReport, n_max: int = 6) -> None:
    for m in CARLITZ_M:
        for n in range(1, n_max + 1):
            for h in range(1, n + 1):
                for j in range(h):
                    if not carlitz_admissible(n, h, j, m):
                        report.skipped += 1
                        continue
                    lhs, rhs = carlitz_4F3(n, h, j, m)
                    report.check(lhs == rhs, n=n, h=h, j=j, m=m, lhs=lhs, rhs=rhs)


def suite_chu(report: SuiteReport, draws: int = 200, seed: int = DRAW_SEED) -> None:
    rng = random.Random(seed)
    while report.cases < draws:
        N = rng.randint(0, 6)
        a, c, e = (_random_rational(rng) for _ in range(3))
        if not _chu_terminates_at(N, a, c, e):
            report.skipped += 1
            continue
        try:
            lhs, rhs = chu_reduction_pair(N, a, c, e)
        except PoleError:
            report.skipped += 1
            continue
        report.check(lhs == rhs, N=N, a=a, c=c, e=e, lhs=lhs, rhs=rhs)


def _chu_terminates_at(N, a, c, e) -> bool:
    """Both sides must stop through ``-N`` itself, not an earlier parameter."""
    lhs = HypSeries((-N, a - c + N, c / 2, (c + 1) / 2), ())
    rhs = HypSeries((-N, a - c + N, c), ())
    return termination_index(lhs) == N and termination_index(rhs) == N


def suite_gauss(report: SuiteReport, draws: int = 200, seed: int = DRAW_SEED + 1) -> None:
    rng = random.Random(seed)
    while report.cases < draws:
        N = rng.randint(0, 8)
        b, c = _random_rational(rng, -20, 20), _random_rational(rng, -20, 20)
        s = HypSeries((-N, b), (c,))
        try:
            if termination_index(s) != N:
                raise PoleError("terminates early")
            lhs = evaluate_terminating(s)
            rhs = gauss_2F1_unity(N, b, c)
        except PoleError:
            report.skipped += 1
            continue
        report.check(lhs == rhs, N=N, b=b, c=c, lhs=lhs, rhs=rhs)


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------

def suite_routes(report: SuiteReport, n_max: int = 5, pairs: int = 6) -> None:
    for params in seeded_limit_params(pairs):
        for n in range(1, n_max + 1):
            for h in range(1, n + 1):
                for l in range(h):
                    vals = {
                        "division": c_division(n, h, l, params),
                        "symmetric": c_symmetric(n, h, l, params),
                        "recurrence": c_recurrence(n, h, l, params),
                    }
                    if h == n:
                        vals["single-recurrence"] = x_recurrence(n, params)[n - l - 1]
                        vals["toeplitz"] = c_toeplitz(n, l, params)
                    if l == h - 1:
                        vals["hypergeometric"] = c_closed_l_top(n, h, params)
                    ok = len(set(vals.values())) == 1
                    report.check(ok, lam=params.lam, theta=params.theta, n=n, h=h, l=l,
                                 **{k.replace("-", "_"): v for k, v in vals.items()})


def cancellation_sums(n: int, h: int, params: LimitParams):
    """Yield ``(l, i, value, expected)`` for every alternating double sum of the quotient."""
    q = quotient_coeffs(n, h, params)
    for l in range(h):
        for i in range(n - l):
            value = alternating_double_sum(q[n - l - 1 - i], n, h, l)
            if i:
                expected = Fraction(0)
            else:
                c = c_division(n, h, l, params)
                expected = (-1) ** (h - 1) * math.factorial(h - 1) * math.factorial(n - h) * c
            yield l, i, value, expected


def suite_cancellation(report: SuiteReport, n_max: int = 5, pairs: int = 3) -> None:
    for params in [LimitParams(1, Fraction(1, 2))] + seeded_limit_params(pairs - 1):
        for n in range(1, n_max + 1):
            for h in range(1, n + 1):
                for l, i, value, expected in cancellation_sums(n, h, params):
                    report.check(value == expected, lam=params.lam, theta=params.theta,
                                 n=n, h=h, l=l, i=i, value=value, expected=expected)


def suite_closed_form(report: SuiteReport, n_max: int = 8) -> None:
    """``c[n,h,h-1]`` at ``lambda = 1`` against the Catalan-triangle product."""
    for theta in (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)):
        params = LimitParams(1, theta)
        for n in range(1, n_max + 1):
            for h in range(1, n + 1):
                got = c_division(n, h, h - 1, params)
                want = (1 - theta) ** n * theta ** (n - 1) * comb(2 * n, n - h)
                report.check(got == want, theta=theta, n=n, h=h, got=got, want=want)


def catalan_coefficient(n: int, h: int, l: int) -> Fraction:
    """``c[n,h,l]`` at ``lambda = 1``, ``theta = 1/2`` in closed form."""
    return Fraction((-1) ** (h - l - 1) * comb(h, h - l - 1) * comb(2 * n, n - h), 2 ** (2 * n - 1))


def suite_catalan(report: SuiteReport, n_max: int = 8) -> None:
    params = LimitParams(1, Fraction(1, 2))
    for n in range(1, n_max + 1):
        for h in range(1, n + 1):
            for l in range(h):
                got = c_division(n, h, l, params)
                want = catalan_coefficient(n, h, l)
                report.check(got == want, n=n, h=h, l=l, got=got, want=want)


def suite_theta_half(report: SuiteReport, n_max: int = 5) -> None:
    for lam in (Fraction(1), Fraction(1, 2), Fraction(2, 3)):
        for n in range(1, n_max + 1):
            for h in range(1, n + 1):
                for a in range(h):
                    for b in range(n - h + 1):
                        ok = theta_half_relation_check(n, h, a, b, lam)
                        report.check(ok, lam=lam, n=n, h=h, a=a, b=b)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def suite_arcsine_case(report: SuiteReport, n_max: int = 8) -> None:
    params = LimitParams(1, Fraction(1, 2))
    table = build_table(n_max, params)
    for n in range(1, n_max + 1):
        got = limit_moment(n, params, table)
        want = arcsine_case_moment(n)
        stationary = Fraction(comb(2 * n, n), 4**n)
        report.check(got == want and got.constant_part == stationary,
                     n=n, got=got, want=want, stationary=stationary)


def suite_finite_oracles(report: SuiteReport) -> None:
    for d in range(2, 13):
        for twice_p in range(2, 2 * d):
            p = Fraction(twice_p, 2)
            for m in range(1, int(p) + 1):
                params = HalfIntegerParams(m, p, d)
                for n in range(1, 4):
                    try:
                        a = finite_time_part(n, params)
                        b = finite_time_part_hooks(n, params)
                    except PoleError:
                        report.skipped += 1
                        continue
                    report.check(a == b, n=n, m=m, p=p, d=d, summed=a, hooks=b)


def half_shift_resolutions(m_values=(3, 4, 5), n_max: int = 4) -> dict[str, bool]:
    """Which readings of the stationary Pochhammer reproduce the finite moments."""
    truth = {(n, m): finite_moment(n, HalfIntegerParams(m, Fraction(2 * m + 1, 2), 2 * m)).as_exppoly()
             for m in m_values for n in range(1, n_max + 1)}
    out = {}
    for name in HALF_SHIFT_RESOLUTIONS:
        try:
            out[name] = all(half_shift_moment(n, m, name) == v for (n, m), v in truth.items())
        except PoleError:
            out[name] = False
    return out


def suite_half_shift(report: SuiteReport) -> None:
    passing = [k for k, ok in half_shift_resolutions().items() if ok]
    report.notes["passing_resolutions"] = passing
    report.check(len(passing) == 1, passing=passing)


def convergence_errors(n: int, t: Fraction, d: int, params: LimitParams, table) -> float:
    """``|finite_time_part(t)/m - limit_time_part(t)|`` at ``m = lam*theta*d``, ``p = theta*d``.

    The difference is formed exactly, so an identically vanishing error is 0.0.
    """
    m, p = params.lt * d, params.theta * d
    if m.denominator != 1 or (2 * p).denominator != 1:
        raise DomainError(f"d={d} does not give integral m and half-integral p")
    fin = finite_time_part(n, HalfIntegerParams(int(m), p, d)).scale(1 / m)
    diff = fin - limit_time_part(n, params, table)
    return abs(diff(float(t))) if diff else 0.0


def suite_convergence(report: SuiteReport, lo: float = 0.3, hi: float = 0.7) -> None:
    params = LimitParams(1, Fraction(1, 2))
    table = build_table(3, params)
    ds = (24, 48, 96)
    for n in range(1, 4):
        for t in (Fraction(1, 2), Fraction(1), Fraction(2)):
            errs = [convergence_errors(n, t, d, params, table) for d in ds]
            for d, e0, e1 in zip(ds, errs, errs[1:]):
                ratio = e1 / e0 if e0 else math.nan
                report.check(lo <= ratio <= hi, n=n, t=t, d=d, delta_d=e0, delta_2d=e1, ratio=ratio)


def suite_laguerre_limit(report: SuiteReport, t: float = 1.0) -> None:
    for h in range(1, 5):
        for m in (50, 100, 200):
            approx, limit = laguerre_inner_sum(h, t, m), laguerre_limit(h, t)
            rel = abs(approx - limit) / abs(limit) if limit else math.inf
            report.check(rel < 2 / m, h=h, m=m, approx=approx, limit=limit, rel_error=rel)


SUITES: dict[str, Callable[[SuiteReport], None]] = {
    "carlitz": suite_carlitz,
    "chu": suite_chu,
    "gauss": suite_gauss,
    "routes": suite_routes,
    "cancellation": suite_cancellation,
    "closed-form": suite_closed_form,
    "catalan": suite_catalan,
    "theta-half": suite_theta_half,
    "arcsine-case": suite_arcsine_case,
    "finite-oracles": suite_finite_oracles,
    "half-shift": suite_half_shift,
    "convergence": suite_convergence,
    "laguerre-limit": suite_laguerre_limit,
}


def run_suite(name: str) -> SuiteReport:
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    report = SuiteReport(name)
    start = time.perf_counter()
    SUITES[name](report)
    report.elapsed = time.perf_counter() - start
    return report
