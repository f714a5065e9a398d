"""Finite-size and limiting moments as exact exponential polynomials.

Every moment-versus-time curve here is a finite sum
``sum coef * t**power * exp(-rate * t)`` with rational ``coef`` and
``rate``; :class:`ExpPoly` stores it canonically so that two routes can be
compared with ``==``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator, Mapping

from .coefficients import CoeffTable, LimitParams
from .errors import DomainError, MissingCoefficient, PoleError
from .exact import (
    HalfIntegerParams,
    as_rational,
    format_rational,
    gamma_ratio,
    laguerre_1_coeffs,
    parse_rational,
    pochhammer,
)
from .hypergeo import HypSeries, evaluate_terminating

__all__ = [
    "ExpPoly",
    "FiniteMoment",
    "eigen_rate",
    "finite_time_part",
    "finite_time_part_hooks",
    "finite_time_part_hypergeometric",
    "finite_series",
    "finite_moment",
    "limit_time_part",
    "limit_moment",
    "limit_stationary",
    "arcsine_case_moment",
    "half_shift_stationary",
    "half_shift_time_part",
    "half_shift_moment",
    "HALF_SHIFT_RESOLUTIONS",
    "HALF_SHIFT_RESOLUTION",
    "laguerre_inner_sum",
    "laguerre_limit",
    "eval_exppoly",
    "eval_exact_at_zero",
]

Key = tuple[Fraction, int]


class ExpPoly:
    """``sum coef * t**power * exp(-rate * t)`` keyed by ``(rate, power)``.

    Zero coefficients are never stored; rates are nonnegative.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, Fraction] | Iterable[tuple[Fraction, Fraction, int]] = ()):
        self.terms: dict[Key, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else (((r, p), c) for c, r, p in terms)
        for (rate, power), coef in items:
            self._add(as_rational(coef), as_rational(rate), int(power))

    def _add(self, coef: Fraction, rate: Fraction, power: int) -> None:
        if rate < 0:
            raise DomainError(f"negative rate {rate}")
        if power < 0:
            raise DomainError(f"negative power {power}")
        key = (rate, power)
        v = self.terms.get(key, Fraction(0)) + coef
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def term(cls, coef, rate=0, power: int = 0) -> "ExpPoly":
        return cls([(coef, rate, power)])

    @classmethod
    def constant(cls, c) -> "ExpPoly":
        return cls.term(c, 0, 0)

    def __iter__(self) -> Iterator[tuple[Fraction, Fraction, int]]:
        """Yield ``(coef, rate, power)`` sorted by rate then power."""
        for (r, p) in sorted(self.terms):
            yield self.terms[(r, p)], r, p

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other) -> "ExpPoly":
        if isinstance(other, (int, Fraction)):
            other = ExpPoly.constant(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        out = ExpPoly(self.terms)
        for (r, p), c in other.terms.items():
            out._add(c, r, p)
        return out

    __radd__ = __add__

    def __neg__(self) -> "ExpPoly":
        return ExpPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "ExpPoly":
        if isinstance(other, (int, Fraction)):
            other = ExpPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "ExpPoly":
        return (-self) + other

    def scale(self, c) -> "ExpPoly":
        c = as_rational(c)
        return ExpPoly({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "ExpPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        out = ExpPoly()
        for (r1, p1), c1 in self.terms.items():
            for (r2, p2), c2 in other.terms.items():
                out._add(c1 * c2, r1 + r2, p1 + p2)
        return out

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExpPoly.constant(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    @property
    def constant_part(self) -> Fraction:
        return self.terms.get((Fraction(0), 0), Fraction(0))

    def time_dependent(self) -> "ExpPoly":
        """Drop the ``(rate=0, power=0)`` term."""
        return ExpPoly({k: v for k, v in self.terms.items() if k != (0, 0)})

    def rates(self) -> set[Fraction]:
        return {r for r, _ in self.terms}

    def at_zero(self) -> Fraction:
        return eval_exact_at_zero(self)

    def __call__(self, t: float) -> float:
        return eval_exppoly(self, t)

    def to_dict(self) -> dict:
        return {
            "terms": [
                {"coef": format_rational(c), "rate": format_rational(r), "power": p}
                for c, r, p in self
            ]
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ExpPoly":
        return cls(
            [(parse_rational(str(t["coef"])), parse_rational(str(t["rate"])), int(t["power"])) for t in doc["terms"]]
        )

    @classmethod
    def from_json(cls, text: str) -> "ExpPoly":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"ExpPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, r, p in self:
            s = f"{c}"
            if p:
                s += "*t" if p == 1 else f"*t^{p}"
            if r:
                s += f"*exp(-{r}*t)"
            parts.append(s)
        return " + ".join(parts)


def eval_exppoly(e: ExpPoly, t: float) -> float:
    """Double-precision value at ``t >= 0``.

    Terms are summed with :func:`math.fsum`; the relative error is of the
    order of a few ulps of the largest term (about 1e-12 for terms up to 1e6
    in magnitude).
    """
    if t < 0:
        raise DomainError("t must be >= 0")
    return math.fsum(float(c) * t**p * math.exp(-float(r) * t) for c, r, p in e)


def eval_exact_at_zero(e: ExpPoly) -> Fraction:
    return sum((c for (r, p), c in e.terms.items() if p == 0), Fraction(0))


def eigen_rate(h: int, j: int, d) -> Fraction:
    """``nu_{h,j}(d) / d`` with ``nu_{h,j}(d) = d h + h (h - 2j - 1)``."""
    d = as_rational(d)
    return (d * h + h * (h - 2 * j - 1)) / d


# ---------------------------------------------------------------------------
# finite size
# ---------------------------------------------------------------------------

def _div(num: Fraction, den: Fraction, what: str) -> Fraction:
    if den == 0:
        if num == 0:
            raise PoleError(f"indeterminate 0/0 in {what}")
        raise PoleError(f"pole in {what}")
    return num / den


def finite_time_part(n: int, params: HalfIntegerParams) -> ExpPoly:
    """Time-dependent part of ``E tr(J_{t/d}^n)`` as an exact :class:`ExpPoly`.

    Sums over ``1 <= h <= n``, ``0 <= j <= h-1`` and ``0 <= k <= n-h`` in the
    rescaled form in which every Gamma ratio is a Pochhammer product.  Hooks
    longer than ``m`` are dropped, which is the same as letting ``1/Gamma``
    vanish at its poles.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    m, p, d = params.m, params.p, params.d
    out = ExpPoly()
    for h in range(1, n + 1):
        outer = Fraction(comb(n, h), factorial(n))
        for j in range(h):
            rate = eigen_rate(h, j, d)
            acc = Fraction(0)
            for k in range(n - h + 1):
                if n - h + j - k > m - 1:
                    continue
                num = (
                    (d - 2 * j - 1)
                    * (d + 2 * h - 2 * j - 1)
                    * pochhammer(d - j, h)
                    * pochhammer(d - p - j, h)
                    * pochhammer(m + h - n - j + k, n)
                    * pochhammer(p + h - n - j + k, n)
                )
                den = (d + h - 2 * j - 1) * pochhammer(p - j, h) * pochhammer(d - n + h - 2 * j - 1 + k, n + h + 1)
                term = _div(num, den, f"summand (n,h,j,k)=({n},{h},{j},{k})")
                acc += (-1) ** (n - h - k + j) * comb(n - h, k) * comb(h - 1, j) * term
            if acc:
                out._add(outer * acc, rate, 0)
    return out


def finite_time_part_hooks(n: int, params: HalfIntegerParams) -> ExpPoly:
    """Same quantity, summed directly over hook pairs ``tau = (h-j, 1^j) <= alpha = (n-k, 1^k)``.

    Each eigenvalue, ``V`` and ``U`` factor is evaluated separately with no
    regrouping; kept as an independent check of :func:`finite_time_part`.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    m, p, d = params.m, params.p, params.d
    q = params.q
    r, s = params.r, params.s
    out = ExpPoly()
    for k in range(min(n, m)):  # alpha = (n-k, 1^k), length k+1 <= m
        a1, la = n - k, k + 1
        for t1 in range(1, a1 + 1):
            for lt_ in range(1, la + 1):
                # eigenvalue of the hook (t1, 1^(lt_-1)) on m rows
                parts = [t1] + [1] * (lt_ - 1) + [0] * (m - lt_)
                nu = sum(ti * (ti + r + s + 1 + 2 * (m - i)) for i, ti in enumerate(parts, start=1))
                V = (
                    (d + 2 * t1 - 1)
                    * gamma_ratio(d + a1 + t1, -a1)          # Gamma(d+t1)/Gamma(d+a1+t1)
                    * gamma_ratio(m - la + 1, a1 + la - 1)   # Gamma(a1+m)/Gamma(m-la+1)
                    * gamma_ratio(p - la + 1, a1 + la - 1)   # Gamma(p+a1)/Gamma(p-la+1)
                    * gamma_ratio(q - lt_ + 1, t1 + lt_ - 1)  # Gamma(q+t1)/Gamma(q-lt+1)
                    / factorial(a1 - t1)
                    / factorial(t1 - 1)
                )
                U = (
                    (d + 1 - 2 * lt_)
                    * gamma_ratio(d - lt_ + 1, -la)           # Gamma(d-la-lt+1)/Gamma(d-lt+1)
                    * gamma_ratio(p + t1, -(t1 + lt_ - 1))     # Gamma(p-lt+1)/Gamma(p+t1)
                    / factorial(la - lt_)
                    / factorial(lt_ - 1)
                )
                den = (r + s + t1 + 2 * m - lt_) * (t1 + lt_ - 1)
                coef = _div((-1) ** (n - a1) * V * U, den, "hook denominator")
                out._add(coef, as_rational(nu) / d, 0)
    return out


def finite_series(n: int, h: int, j: int, params: HalfIntegerParams) -> HypSeries:
    """The balanced 4F3 that collapses the inner hook sum for ``(h, j)``."""
    m, p, d = params.m, params.p, params.d
    return HypSeries(
        (-(n - h), m + h - j, p + h - j, d - n + h - 2 * j - 1),
        (m - n + h - j, p - n + h - j, d + 2 * h - 2 * j),
    )


def finite_time_part_hypergeometric(n: int, params: HalfIntegerParams) -> ExpPoly:
    """Same quantity with the inner sum collapsed into a balanced terminating 4F3.

    Needs ``m >= n`` and ``d >= n + h`` so that no factor sits at a pole.
    """
    m, p, d = params.m, params.p, params.d
    q = params.q
    if m < n:
        raise DomainError("the 4F3 grouping needs m >= n")
    out = ExpPoly()
    for h in range(1, n + 1):
        for j in range(h):
            pref = Fraction((-1) ** (n - h + j), h * factorial(n - h) * factorial(h - j - 1) * factorial(j))
            g = (
                (d + 2 * h - 2 * j - 1)
                * (d - 2 * j - 1)
                * gamma_ratio(p + h - n - j, n - h)   # Gamma(p-j)/Gamma(p+h-n-j)
                * pochhammer(q - j, h)
                * pochhammer(d - j, h)
                * pochhammer(m + h - n - j, n)        # Gamma(h-j+m)/Gamma(m+h-n-j)
            )
            den = (d + h - 2 * j - 1) * pochhammer(d - n + h - 2 * j - 1, n + h + 1)
            f = evaluate_terminating(finite_series(n, h, j, params))
            out._add(pref * _div(g, den, "4F3 prefactor") * f, eigen_rate(h, j, d), 0)
    return out


@dataclass(frozen=True)
class FiniteMoment:
    """``M_n(t) = stationary + time_part(t)`` at finite size."""

    n: int
    params: HalfIntegerParams
    time_part: ExpPoly
    stationary: Fraction

    def as_exppoly(self) -> ExpPoly:
        return self.time_part + self.stationary

    def __call__(self, t: float) -> float:
        return float(self.stationary) + eval_exppoly(self.time_part, t)


def finite_moment(n: int, params: HalfIntegerParams) -> FiniteMoment:
    """Stationary value recovered from ``M_n(0) = tr(I_m) = m``."""
    tp = finite_time_part(n, params)
    return FiniteMoment(n, params, tp, params.m - eval_exact_at_zero(tp))


# ---------------------------------------------------------------------------
# large-size limit
# ---------------------------------------------------------------------------

def limit_time_part(n: int, params: LimitParams, table: CoeffTable) -> ExpPoly:
    """``sum_h (-1)^(h-1)/h e^(-ht) sum_l (2ht)^l / l! c[n,h,l]``."""
    if table.params != params:
        raise DomainError("coefficient table was built for different (lambda, theta)")
    out = ExpPoly()
    for h in range(1, n + 1):
        for l in range(h):
            try:
                c = table[(n, h, l)]
            except MissingCoefficient:
                raise MissingCoefficient(f"table lacks c[{n},{h},{l}]") from None
            coef = Fraction((-1) ** (h - 1) * (2 * h) ** l, h * factorial(l)) * c
            out._add(coef, Fraction(h), l)
    return out


def limit_stationary(n: int, params: LimitParams, table: CoeffTable) -> Fraction:
    return 1 - eval_exact_at_zero(limit_time_part(n, params, table))


def limit_moment(n: int, params: LimitParams, table: CoeffTable) -> ExpPoly:
    """Normalized limit moment including its stationary constant."""
    tp = limit_time_part(n, params, table)
    return tp + (1 - eval_exact_at_zero(tp))


def arcsine_case_moment(n: int) -> ExpPoly:
    """Moments at ``lambda = 1``, ``theta = 1/2``: arcsine part plus Laguerre time part."""
    if n < 1:
        raise DomainError("n must be >= 1")
    out = ExpPoly.constant(Fraction(comb(2 * n, n), 4**n))
    scale = Fraction(1, 2 ** (2 * n - 1))
    for h in range(1, n + 1):
        lag = laguerre_1_coeffs(h - 1)
        for l, a in enumerate(lag):
            # L(2ht): x^l -> (2h)^l t^l
            out._add(scale * comb(2 * n, n - h) * a * (2 * h) ** l / h, Fraction(h), l)
    return out


# ---------------------------------------------------------------------------
# p = m + 1/2, d = 2m
# ---------------------------------------------------------------------------

HALF_SHIFT_RESOLUTIONS = {
    "h": lambda m, h, n: 2 * m - h,
    "0": lambda m, h, n: 2 * m,
    "1": lambda m, h, n: 2 * m - 1,
    "n": lambda m, h, n: 2 * m - n,
    "n-1": lambda m, h, n: 2 * m - n + 1,
    "2h": lambda m, h, n: 2 * m - 2 * h,
}
# the reading that reproduces the finite-size stationary value
HALF_SHIFT_RESOLUTION = "h"


def half_shift_stationary(n: int, m: int, resolution: str = HALF_SHIFT_RESOLUTION) -> Fraction:
    """``(1/n!) sum_h (-1)^h C(n-1,h) (m-h)_n (m-h+1/2)_n / (base)_n``.

    The Pochhammer in the denominator carries an undetermined index; the
    ``resolution`` names the base used for it.
    """
    base = HALF_SHIFT_RESOLUTIONS[resolution]
    total = Fraction(0)
    for h in range(n):
        num = pochhammer(m - h, n) * pochhammer(Fraction(2 * m - 2 * h + 1, 2), n)
        total += (-1) ** h * comb(n - 1, h) * _div(num, pochhammer(base(m, h, n), n), "stationary sum")
    return total / factorial(n)


def half_shift_time_part(n: int, m: int) -> ExpPoly:
    out = ExpPoly()
    for h in range(1, n + 1):
        outer = Fraction(comb(2 * n, n - h), 4**n)
        for j in range(h):
            rate = h + Fraction(h * (h - 1), 2 * m) - Fraction(j * h, m)
            val = (
                (-1) ** j
                * comb(h - 1, j)
                * Fraction(2 * m - 2 * j - 1, 2 * m + h - 2 * j - 1)
                * Fraction(factorial(2 * m + h - j - 1), factorial(h) * factorial(2 * m - j - 1))
            )
            out._add(outer * val, rate, 0)
    return out


def half_shift_moment(n: int, m: int, resolution: str = HALF_SHIFT_RESOLUTION) -> ExpPoly:
    """``M_n`` at ``r = 1/2``, ``s = -1/2`` from the explicit double sum."""
    if n < 1 or m < 1:
        raise DomainError("need n >= 1 and m >= 1")
    return half_shift_time_part(n, m) + half_shift_stationary(n, m, resolution)


# ---------------------------------------------------------------------------
# the inner Laguerre limit
# ---------------------------------------------------------------------------

def laguerre_inner_sum(h: int, t: float, m: int) -> float:
    """``(1/2m) sum_j (-1)^j e^(htj/2m) C(h-1,j) (2m+h-j-1)! / (h! (2m-j-1)!)``."""
    terms = []
    for j in range(h):
        ratio = Fraction(factorial(2 * m + h - j - 1), factorial(h) * factorial(2 * m - j - 1))
        terms.append((-1) ** j * comb(h - 1, j) * float(ratio) * math.exp(h * t * j / (2 * m)))
    return math.fsum(terms) / (2 * m)


def laguerre_limit(h: int, t: float) -> float:
    """``L_{h-1}^{(1)}(h t) / h``."""
    x = h * t
    return math.fsum(float(c) * x**i for i, c in enumerate(laguerre_1_coeffs(h - 1))) / h
