"""Limit coefficients ``c[n, h, l]`` of the free Jacobi moments.

Routes, all exact and mutually checkable:

``division``
    expand the numerator ``P`` and denominator ``D`` of the rescaled summand
    as polynomials in ``d``, long-divide, read ``c`` off the constant term
    of the quotient.
``symmetric``
    the same constant term written through elementary / complete
    homogeneous symmetric functions of the roots of ``P`` and ``D``.
``recurrence``
    the triangular double recurrence for ``Z[a, b]`` (coefficient of
    ``j^a k^b`` in ``q_{a+b}``).
``closed-form``
    the special cases ``h == n`` (single recurrence / Toeplitz inversion)
    and ``l == h - 1`` (hypergeometric closed form).
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterator, Mapping

from .errors import DomainError, MissingCoefficient
from .exact import as_rational, bell_gamma, format_rational, parse_rational, pochhammer
from .hypergeo import hyp
from .polyring import (
    AffineRoot,
    BivarPoly,
    DPoly,
    elementary_symmetric_all,
    complete_homogeneous_all,
    long_divide,
)

log = logging.getLogger(__name__)

__all__ = [
    "LimitParams",
    "RootLists",
    "CoeffTable",
    "ROUTES",
    "build_P",
    "build_D",
    "root_lists",
    "quotient_coeffs",
    "quotient_coeffs_at",
    "quotient_coeffs_recurrence",
    "c_division",
    "c_symmetric",
    "x_alpha",
    "x_beta",
    "x_recurrence",
    "c_toeplitz",
    "c_closed_l_top",
    "z_A",
    "z_B",
    "z_recurrence",
    "c_recurrence",
    "a_theta_half",
    "theta_half_relation_check",
    "alternating_double_sum",
    "compute_coefficient",
    "build_table",
    "index_triples",
]

ROUTES = ("division", "symmetric", "recurrence", "closed-form")


@dataclass(frozen=True)
class LimitParams:
    """Large-size shape parameters: ``m = lam*theta*d`` and ``p = theta*d``."""

    lam: Fraction
    theta: Fraction

    def __post_init__(self) -> None:
        lam, theta = as_rational(self.lam), as_rational(self.theta)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "theta", theta)
        if not 0 < lam <= 1:
            raise DomainError(f"lambda must lie in (0, 1], got {lam}")
        if not 0 < theta < 1:
            raise DomainError(f"theta must lie in (0, 1), got {theta}")

    @property
    def lt(self) -> Fraction:
        """``lambda * theta``, the limiting ratio ``m / d``."""
        return self.lam * self.theta


def _check_nh(n: int, h: int) -> None:
    if not 1 <= h <= n:
        raise DomainError(f"need 1 <= h <= n, got n={n}, h={h}")


def _check_nhl(n: int, h: int, l: int) -> None:
    _check_nh(n, h)
    if not 0 <= l <= h - 1:
        raise DomainError(f"need 0 <= l <= h-1, got h={h}, l={l}")


def index_triples(n_max: int) -> Iterator[tuple[int, int, int]]:
    for n in range(1, n_max + 1):
        for h in range(1, n + 1):
            for l in range(h):
                yield n, h, l


# ---------------------------------------------------------------------------
# P, D and their roots
# ---------------------------------------------------------------------------

def _factor(dcoef, c0, cj=0, ck=0) -> DPoly:
    """The linear factor ``dcoef*d + c0 + cj*j + ck*k``."""
    return DPoly([BivarPoly.affine(c0, cj, ck), BivarPoly.constant(dcoef)])


def _mul_factors(factors: list[DPoly], lead=1) -> DPoly:
    out = DPoly([as_rational(lead)])
    for f in factors:
        # f = a*d + b with b affine: reuse the fast path of mul_linear
        a = f.coeffs[1].constant_value()
        b = f.coeffs[0]
        root = AffineRoot(-b.coeff(0, 0) / a, -b.coeff(1, 0) / a, -b.coeff(0, 1) / a)
        out = out.mul_linear(a, root)
    return out


def build_P(n: int, h: int, params: LimitParams) -> DPoly:
    """Numerator ``(d-2j-1)(d+2h-2j-1)(d-j)_h((1-th)d-j)_h(lt d+h-n-j+k)_n(th d+h-n-j+k)_n``."""
    _check_nh(n, h)
    th, lt = params.theta, params.lt
    fs = [_factor(1, -1, -2), _factor(1, 2 * h - 1, -2)]
    fs += [_factor(1, i, -1) for i in range(h)]
    fs += [_factor(1 - th, i, -1) for i in range(h)]
    fs += [_factor(lt, h - n + i, -1, 1) for i in range(n)]
    fs += [_factor(th, h - n + i, -1, 1) for i in range(n)]
    return _mul_factors(fs)


def build_D(n: int, h: int, l: int, params: LimitParams) -> DPoly:
    """Denominator ``lt d^(l+1) (d+h-2j-1) (th d - j)_h (d-n+h-2j-1+k)_(n+h+1)``."""
    _check_nh(n, h)
    if l < 0:
        raise DomainError("l must be a natural number")
    th, lt = params.theta, params.lt
    fs = [_factor(1, h - 1, -2)]
    fs += [_factor(th, i, -1) for i in range(h)]
    fs += [_factor(1, -n + h - 1 + i, -2, 1) for i in range(n + h + 1)]
    return _mul_factors(fs, lead=lt).shift(l + 1)


@dataclass(frozen=True)
class RootLists:
    """Roots ``y`` of ``P`` and ``z`` of ``D`` as affine forms in ``(j, k)``."""

    y: tuple[AffineRoot, ...]
    z: tuple[AffineRoot, ...]
    lead_P: Fraction
    lead_D: Fraction

    @property
    def A(self) -> int:
        return len(self.y)

    @property
    def B(self) -> int:
        return len(self.z)

    @property
    def C(self) -> int:
        return self.A - self.B


def root_lists(n: int, h: int, l: int, params: LimitParams) -> RootLists:
    """Piecewise root listing, indices are 1-based as in the usual statement."""
    _check_nh(n, h)
    th, lt = params.theta, params.lt
    A = 2 * n + 2 * h + 2
    B = n + 2 * h + l + 3
    y = []
    for i in range(1, A + 1):
        if i == 1:
            r = AffineRoot(1 - 2 * h, 2)
        elif i == 2:
            r = AffineRoot(1, 2)
        elif i <= h + 2:
            r = AffineRoot(3 - i, 1)
        elif i <= 2 * h + 2:
            r = AffineRoot(h - i + 3, 1).scaled(1 / (1 - th))
        elif i <= n + 2 * h + 2:
            r = AffineRoot(n + h - i + 3, 1, -1).scaled(1 / lt)
        else:
            r = AffineRoot(2 * n + h - i + 3, 1, -1).scaled(1 / th)
        y.append(r)
    z = []
    for i in range(1, B + 1):
        if i <= l + 1:
            r = AffineRoot()
        elif i == l + 2:
            r = AffineRoot(1 - h, 2)
        elif i <= h + l + 2:
            r = AffineRoot(l - i + 3, 1).scaled(1 / th)
        else:
            r = AffineRoot(n + l - i + 4, 2, -1)
        z.append(r)
    lead_P = th**n * (1 - th) ** h * lt**n
    lead_D = lt * th**h
    return RootLists(tuple(y), tuple(z), lead_P, lead_D)


# ---------------------------------------------------------------------------
# division route
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def quotient_coeffs_at(n: int, h: int, l: int, params: LimitParams) -> tuple[BivarPoly, ...]:
    """``(q_0, ..., q_{n-l-1})`` from dividing ``build_P`` by ``build_D`` at this ``l``.

    ``q_i`` is the coefficient of ``d**(n-l-1-i)`` in the quotient.
    """
    _check_nh(n, h)
    if not 0 <= l <= n - 1:
        raise DomainError(f"need 0 <= l <= n-1, got l={l}")
    Q, _ = long_divide(build_P(n, h, params), build_D(n, h, l, params), quotient_only=True)
    top = n - l - 1
    if Q.degree != top:
        raise ArithmeticError(f"quotient degree {Q.degree} != {top}")
    return tuple(Q.coeff(top - i) for i in range(top + 1))


def quotient_coeffs(n: int, h: int, params: LimitParams) -> list[BivarPoly]:
    """``q_0, ..., q_{n-1}`` from the ``l = 0`` division; shared by every ``l``."""
    return list(quotient_coeffs_at(n, h, 0, params))


def c_division(n: int, h: int, l: int, params: LimitParams) -> Fraction:
    """Coefficient of ``j^(h-l-1) k^(n-h)`` in ``q_{n-l-1}``."""
    _check_nhl(n, h, l)
    q = quotient_coeffs_at(n, h, 0, params)[n - l - 1]
    return q.coeff(h - l - 1, n - h)


# ---------------------------------------------------------------------------
# symmetric-function route
# ---------------------------------------------------------------------------

def quotient_coeffs_recurrence(n: int, h: int, params: LimitParams, l: int = 0) -> list[BivarPoly]:
    """``q_i = a~_{A-i} - sum_{v<i} b~_{B-i+v} q_v`` with ``a~, b~`` from elementary symmetric functions.

    Independent of long division: only the root lists are used.
    """
    rl = root_lists(n, h, l, params)
    top = n - l - 1
    scale = rl.lead_P / rl.lead_D
    ey = elementary_symmetric_all(rl.y, top)
    ez = elementary_symmetric_all(rl.z, top)
    a_t = [ey[i].scale(scale * (-1) ** i) for i in range(top + 1)]
    b_t = [ez[w].scale((-1) ** w) for w in range(top + 1)]
    q: list[BivarPoly] = []
    for i in range(top + 1):
        acc = a_t[i]
        for v in range(i):
            acc = acc - b_t[i - v] * q[v]
        q.append(acc)
    return q


def _q_constant_term_symmetric(n: int, h: int, l: int, params: LimitParams) -> BivarPoly:
    rl = root_lists(n, h, l, params)
    C = rl.C
    ey = elementary_symmetric_all(rl.y, C)
    hz = complete_homogeneous_all(rl.z, C)
    acc = BivarPoly()
    for v in range(C + 1):
        term = ey[C - v] * hz[v]
        acc = acc + term if v % 2 == 0 else acc - term
    return acc.scale((-1) ** C * rl.lead_P / rl.lead_D)


def c_symmetric(n: int, h: int, l: int, params: LimitParams) -> Fraction:
    _check_nhl(n, h, l)
    return _q_constant_term_symmetric(n, h, l, params).coeff(h - l - 1, n - h)


# ---------------------------------------------------------------------------
# h == n: single recurrence and Toeplitz inversion
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def x_alpha(n: int, i: int, params: LimitParams) -> Fraction:
    lt, th = params.lt, params.theta
    total = Fraction(0)
    for i1, i2, i3, i4, i5 in _compositions(i, 5):
        if i1 > 2 or max(i2, i3, i4, i5) > n:
            continue
        w = comb(2, i1) * comb(n, i2) * comb(n, i3) * comb(n, i4) * comb(n, i5) * 2**i1
        total += w * lt ** (n - 1 - i3) * (1 - th) ** (n - i4) * th ** (-i5)
    return (-1) ** i * total


def x_beta(n: int, i: int, theta) -> Fraction:
    th = as_rational(theta)
    total = Fraction(0)
    for i1, i2, i3 in _compositions(i, 3):
        if i1 > 1 or i2 > n or i3 > 2 * n + 1:
            continue
        total += comb(1, i1) * comb(n, i2) * comb(2 * n + 1, i3) * 2 ** (i1 + i3) * th ** (-i2)
    return (-1) ** i * total


def x_recurrence(n: int, params: LimitParams) -> list[Fraction]:
    """``X_0, ..., X_{n-1}`` with ``c[n, n, l] = X[n-l-1]``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    beta = [x_beta(n, i, params.theta) for i in range(n)]
    X = [params.lt ** (n - 1) * (1 - params.theta) ** n]
    for i in range(1, n):
        X.append(x_alpha(n, i, params) - sum((beta[i - v] * X[v] for v in range(i)), Fraction(0)))
    return X


def c_toeplitz(n: int, l: int, params: LimitParams) -> Fraction:
    """``c[n, n, l] = sum_v alpha_v gamma_{n-l-1-v}`` with Bell-polynomial ``gamma``."""
    _check_nhl(n, n, l)
    top = n - l - 1
    beta = [x_beta(n, i, params.theta) for i in range(1, top + 1)]
    return sum(
        (x_alpha(n, v, params) * bell_gamma(beta[: top - v]) for v in range(top + 1)),
        Fraction(0),
    )


# ---------------------------------------------------------------------------
# l == h - 1: closed form
# ---------------------------------------------------------------------------

def c_closed_l_top(n: int, h: int, params: LimitParams) -> Fraction:
    _check_nh(n, h)
    lam, th, lt = params.lam, params.theta, params.lt
    total = Fraction(0)
    for v in range(n - h + 1):
        f = hyp((-v, -n), (n - v + 1,), 1 / lam)
        total += pochhammer(h - n, v) * pochhammer(-n, v) / (pochhammer(-2 * n, v) * factorial(v) * th**v) * f
    return (1 - th) ** h * lt ** (n - 1) * (-th) ** (n - h) * comb(2 * n, n - h) * total


# ---------------------------------------------------------------------------
# general double recurrence
# ---------------------------------------------------------------------------

def z_A(n: int, h: int, a: int, b: int, params: LimitParams) -> Fraction:
    """Coefficient of ``j^a k^b`` in ``a~_{A-a-b}``."""
    lt, th = params.lt, params.theta
    total = Fraction(0)
    for i in range(b + 1):
        if i > n or b - i > n:
            continue
        outer = comb(n, i) * comb(n, b - i)
        inner = Fraction(0)
        for i1, i2, i3, i4, i5 in _compositions(a, 5):
            if i1 > 2 or i2 > h or i3 > h or i4 > n - i or i5 > n - (b - i):
                continue
            w = comb(2, i1) * comb(h, i2) * comb(h, i3) * comb(n - i, i4) * comb(n - (b - i), i5) * 2**i1
            inner += w * (1 - th) ** (h - i3) * lt ** (n - 1 - i - i4) * th ** ((n - h) - (b - i) - i5)
        total += outer * inner
    return (-1) ** a * total


def z_B(n: int, h: int, a: int, b: int, theta) -> Fraction:
    """Coefficient of ``j^a k^b`` in ``b~_{B-a-b}``."""
    th = as_rational(theta)
    total = Fraction(0)
    for j1, j2, j3 in _compositions(a, 3):
        if j1 > 1 or j2 > h or j3 > n + h + 1 - b:
            continue
        total += comb(1, j1) * comb(h, j2) * comb(n + h + 1 - b, j3) * Fraction(2 ** (j1 + j3)) / th**j2
    return (-1) ** a * comb(n + h + 1, b) * total


@lru_cache(maxsize=256)
def _z_table(n: int, h: int, params: LimitParams) -> tuple[tuple[Fraction, ...], ...]:
    th = params.theta
    if z_B(n, h, 0, 0, th) != 1:
        raise ArithmeticError("B[0,0] must equal 1 for the recurrence to be triangular")
    amax, bmax = h - 1, n - h
    B = {(a, b): z_B(n, h, a, b, th) for a in range(amax + 1) for b in range(bmax + 1)}
    Z: dict[tuple[int, int], Fraction] = {}
    for total in range(amax + bmax + 1):
        for a in range(max(0, total - bmax), min(amax, total) + 1):
            b = total - a
            if (a, b) == (0, 0):
                Z[a, b] = params.lt ** (n - 1) * th ** (n - h) * (1 - th) ** h
                continue
            acc = z_A(n, h, a, b, params)
            for u in range(a + 1):
                for v in range(b + 1):
                    if (u, v) != (a, b):
                        acc -= Z[u, v] * B[a - u, b - v]
            Z[a, b] = acc
    return tuple(tuple(Z[a, b] for b in range(bmax + 1)) for a in range(amax + 1))


def z_recurrence(n: int, h: int, params: LimitParams) -> dict[tuple[int, int], Fraction]:
    """``Z[a, b]`` for ``0 <= a <= h-1``, ``0 <= b <= n-h``; ``c[n,h,l] = Z[h-l-1, n-h]``."""
    _check_nh(n, h)
    rows = _z_table(n, h, params)
    return {(a, b): v for a, row in enumerate(rows) for b, v in enumerate(row)}


def c_recurrence(n: int, h: int, l: int, params: LimitParams) -> Fraction:
    _check_nhl(n, h, l)
    return _z_table(n, h, params)[h - l - 1][n - h]


def a_theta_half(n: int, h: int, a: int, b: int, lam) -> Fraction:
    """``A[a, b]`` at ``theta = 1/2`` through terminating 2F1's at ``1 - lambda``."""
    lam = as_rational(lam)
    total = Fraction(0)
    for i2 in range(a + 1):
        outer = (2 / lam) ** (a - i2) * comb(h, i2) * comb(2 * n + h + 2 - b, a - i2)
        inner = Fraction(0)
        for i in range(b + 1):
            if i > n or b - i > n:
                continue
            f = hyp((i2 - a, b - i - n - h - 2), (b - 2 * n - h - 2,), 1 - lam)
            inner += comb(n, i) * comb(n, b - i) / lam**i * f
        total += outer * inner
    return (-1) ** a * lam ** (n - 1) * Fraction(2**b, 2 ** (2 * n - 1)) * total


def theta_half_relation_check(
    n: int, h: int, a: int, b: int, lam, Z: Mapping[tuple[int, int], Fraction] | None = None
) -> bool:
    """Substitute ``Z`` (default: the recurrence solution at ``theta=1/2``) into the explicit linear relation."""
    lam = as_rational(lam)
    if Z is None:
        Z = z_recurrence(n, h, LimitParams(lam, Fraction(1, 2)))
    lhs = Fraction(0)
    for u in range(a + 1):
        for v in range(b + 1):
            lhs += 2 ** (a - u) * (-1) ** u * comb(n + h + 1, b - v) * comb(n + 2 * h + 2 - b + v, a - u) * Z[u, v]
    rhs = (-1) ** a * a_theta_half(n, h, a, b, lam)
    return lhs == rhs


# ---------------------------------------------------------------------------
# cancellation check
# ---------------------------------------------------------------------------

def alternating_double_sum(q: BivarPoly, n: int, h: int, l: int) -> Fraction:
    """``sum_j (-1)^j C(h-1,j) j^l sum_k (-1)^(n-h-k) C(n-h,k) q(j,k)``."""
    total = Fraction(0)
    for j in range(h):
        wj = (-1) ** j * comb(h - 1, j) * j**l
        if not wj:
            continue
        for k in range(n - h + 1):
            total += wj * (-1) ** (n - h - k) * comb(n - h, k) * q(j, k)
    return total


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def compute_coefficient(n: int, h: int, l: int, params: LimitParams, route: str = "division") -> Fraction:
    if route == "division":
        return c_division(n, h, l, params)
    if route == "symmetric":
        return c_symmetric(n, h, l, params)
    if route == "recurrence":
        return c_recurrence(n, h, l, params)
    if route == "closed-form":
        if l == h - 1:
            return c_closed_l_top(n, h, params)
        if h == n:
            return c_toeplitz(n, l, params)
        raise DomainError(f"no closed form for (n,h,l)=({n},{h},{l}); needs h == n or l == h-1")
    raise DomainError(f"unknown route {route!r}; expected one of {ROUTES}")


@dataclass
class CoeffTable:
    """``(n, h, l) -> c`` at fixed ``(lambda, theta)``, each entry tagged with its route."""

    params: LimitParams
    entries: dict[tuple[int, int, int], tuple[Fraction, str]] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int, int]) -> Fraction:
        try:
            return self.entries[key][0]
        except KeyError:
            raise MissingCoefficient(f"no coefficient for (n,h,l)={key}") from None

    def __contains__(self, key) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def route(self, key: tuple[int, int, int]) -> str:
        return self.entries[key][1]

    def add(self, n: int, h: int, l: int, value, route: str) -> None:
        _check_nhl(n, h, l)
        if route not in ROUTES:
            raise DomainError(f"unknown route {route!r}")
        value = as_rational(value)
        key = (n, h, l)
        if key in self.entries and self.entries[key][0] != value:
            old, old_route = self.entries[key]
            raise ArithmeticError(f"{key}: {route} gives {value}, {old_route} gave {old}")
        self.entries.setdefault(key, (value, route))

    def merge(self, other: "CoeffTable") -> "CoeffTable":
        """Union of two tables; conflicting values raise, first route wins."""
        if other.params != self.params:
            raise DomainError("cannot merge tables at different (lambda, theta)")
        out = CoeffTable(self.params, dict(self.entries))
        for (n, h, l), (v, r) in sorted(other.entries.items()):
            out.add(n, h, l, v, r)
        return out

    def covers(self, n: int) -> bool:
        return all((n, h, l) in self.entries for h in range(1, n + 1) for l in range(h))

    @property
    def n_max(self) -> int:
        return max((n for n, _, _ in self.entries), default=0)

    def to_dict(self) -> dict:
        return {
            "lambda": format_rational(self.params.lam),
            "theta": format_rational(self.params.theta),
            "entries": [
                {"n": n, "h": h, "l": l, "value": format_rational(v), "route": r}
                for (n, h, l), (v, r) in sorted(self.entries.items())
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "CoeffTable":
        params = LimitParams(parse_rational(str(doc["lambda"])), parse_rational(str(doc["theta"])))
        table = cls(params)
        for e in doc["entries"]:
            table.add(int(e["n"]), int(e["h"]), int(e["l"]), parse_rational(str(e["value"])), e["route"])
        return table

    @classmethod
    def from_json(cls, text: str) -> "CoeffTable":
        return cls.from_dict(json.loads(text))


def _pair_job(n: int, h: int, params: LimitParams, route: str) -> list[tuple[int, int, int, Fraction]]:
    out = []
    for l in range(h):
        r = route
        if route == "closed-form" and not (l == h - 1 or h == n):
            r = "recurrence"
        out.append((n, h, l, compute_coefficient(n, h, l, params, r)))
    return out


def build_table(
    n_max: int,
    params: LimitParams,
    route: str = "division",
    executor: Executor | None = None,
    progress: Callable[[int, int], None] | None = None,
    n_min: int = 1,
) -> CoeffTable:
    """All ``c[n, h, l]`` for ``n_min <= n <= n_max``.

    Jobs are independent per ``(n, h)``; with an executor they run
    concurrently, results are inserted in sorted index order either way.
    For ``closed-form`` the entries without a closed form fall back to the
    recurrence route and are tagged accordingly.
    """
    if route not in ROUTES:
        raise DomainError(f"unknown route {route!r}")
    pairs = [(n, h) for n in range(max(1, n_min), n_max + 1) for h in range(1, n + 1)]
    if executor is None:
        results = [_pair_job(n, h, params, route) for n, h in pairs]
    else:
        futures = [executor.submit(_pair_job, n, h, params, route) for n, h in pairs]
        results = [f.result() for f in futures]
    table = CoeffTable(params)
    for done, rows in enumerate(results, start=1):
        for n, h, l, v in rows:
            tag = route
            if route == "closed-form" and not (l == h - 1 or h == n):
                tag = "recurrence"
            table.add(n, h, l, v, tag)
        if progress:
            progress(done, len(pairs))
    return table
