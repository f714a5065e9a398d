"""Exact rational kernels shared by every other module.

Everything here works on :class:`fractions.Fraction` (aliased ``Rational``)
and plain ``int``; no floating point is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence, Union

from .errors import DomainError, PoleError

Rational = Fraction
RationalLike = Union[int, Fraction]

__all__ = [
    "Rational",
    "HalfIntegerParams",
    "as_rational",
    "parse_rational",
    "format_rational",
    "is_nonpositive_integer",
    "pochhammer",
    "binomial",
    "gamma_ratio",
    "reciprocal_gamma_ratio",
    "alternating_power_sum",
    "laguerre_1_coeffs",
    "bell_gamma",
    "integer_partitions",
]


def as_rational(x: RationalLike | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a terminating decimal like ``"0.5"``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not an exact rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_nonpositive_integer(x: RationalLike) -> bool:
    x = as_rational(x)
    return x.denominator == 1 and x <= 0


def pochhammer(a: RationalLike, n: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+n-1)``; the empty product is 1."""
    if n < 0:
        raise DomainError("pochhammer length must be a natural number")
    a = as_rational(a)
    out = Fraction(1)
    for i in range(n):
        out *= a + i
        if not out:
            break
    return out


def binomial(n: int, k: int) -> Fraction:
    if n < 0:
        raise DomainError(f"binomial requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return Fraction(0)
    return Fraction(comb(n, k))


def _gamma_is_pole(x: Fraction) -> bool:
    return is_nonpositive_integer(x)


def gamma_ratio(a: RationalLike, offset: int) -> Fraction:
    """Return ``Gamma(a + offset) / Gamma(a)`` exactly.

    Poles follow the vanishing-reciprocal convention: a pole of the
    denominator alone gives 0, a pole of the numerator alone raises
    :class:`PoleError`.  When both Gamma values sit at poles the ratio is
    taken as the limit along a common shift ``a -> a + eps``.
    """
    a = as_rational(a)
    b = a + offset
    num_pole, den_pole = _gamma_is_pole(b), _gamma_is_pole(a)
    if num_pole and not den_pole:
        raise PoleError(f"Gamma({b}) is a pole in the numerator of Gamma({b})/Gamma({a})")
    if den_pole and not num_pole:
        return Fraction(0)
    if num_pole and den_pole:
        # Gamma(-N + eps) ~ (-1)^N / (N! eps)
        nb, na = int(-b), int(-a)
        sign = -1 if (nb - na) % 2 else 1
        return Fraction(sign * factorial(na), factorial(nb))
    if offset >= 0:
        return pochhammer(a, offset)
    return 1 / pochhammer(b, -offset)


def reciprocal_gamma_ratio(a: RationalLike, offset: int) -> Fraction:
    """Return ``Gamma(a) / Gamma(a + offset)``; the reciprocal of :func:`gamma_ratio`."""
    a = as_rational(a)
    return gamma_ratio(a + offset, -offset)


def alternating_power_sum(a: int, b: int) -> Fraction:
    """``sum_{j=0}^{b} (-1)^j j^a C(b, j)`` with ``0**0 == 1``.

    Vanishes for ``a < b`` and equals ``(-1)^a a!`` for ``a == b``.
    """
    if a < 0 or b < 0:
        raise DomainError("alternating_power_sum needs naturals")
    return Fraction(sum((-1) ** j * j**a * comb(b, j) for j in range(b + 1)))


def laguerre_1_coeffs(degree: int) -> list[Fraction]:
    """Coefficients of the generalized Laguerre polynomial ``L_degree^{(1)}(x)``.

    Entry ``l`` is the coefficient of ``x**l``; uses
    ``L_{h-1}^{(1)}(x) = sum_l (-x)^l / l! * C(h, l+1)`` with ``h = degree + 1``.
    """
    if degree < 0:
        raise DomainError("Laguerre degree must be a natural number")
    h = degree + 1
    return [Fraction((-1) ** l * comb(h, l + 1), factorial(l)) for l in range(h)]


@lru_cache(maxsize=None)
def integer_partitions(a: int) -> tuple[tuple[int, ...], ...]:
    """All multiplicity vectors ``(v_1, ..., v_a)`` with ``sum i*v_i == a``."""
    out: list[tuple[int, ...]] = []

    def rec(part: int, remaining: int, acc: list[int]) -> None:
        if part == 0:
            if remaining == 0:
                out.append(tuple(reversed(acc)))
            return
        for v in range(remaining // part + 1):
            acc.append(v)
            rec(part - 1, remaining - v * part, acc)
            acc.pop()

    rec(a, a, [])
    return tuple(out)


def bell_gamma(betas: Sequence[RationalLike]) -> Fraction:
    """Complete ordinary Bell polynomial in ``(-beta_1, ..., -beta_a)``.

    This is entry ``a`` of the inverse of the unit lower-triangular Toeplitz
    matrix whose sub-diagonals are ``beta_1, beta_2, ...``.
    """
    betas = [as_rational(b) for b in betas]
    a = len(betas)
    if a == 0:
        return Fraction(1)
    total = Fraction(0)
    for mult in integer_partitions(a):
        size = sum(mult)
        coef = factorial(size)
        term = Fraction(1)
        for i, v in enumerate(mult):
            if v:
                coef //= factorial(v)
                term *= (-betas[i]) ** v
        total += coef * term
    return total


@dataclass(frozen=True)
class HalfIntegerParams:
    """Corner shape ``m x p`` inside ``U(d)``; ``p`` may be a half-integer.

    Derived: ``r = p - m``, ``q = d - p``, ``s = q - m``.
    """

    m: int
    p: Fraction
    d: int

    def __post_init__(self) -> None:
        p = as_rational(self.p)
        object.__setattr__(self, "p", p)
        if not isinstance(self.m, int) or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.d, int) or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d!r}")
        if (2 * p).denominator != 1:
            raise DomainError(f"2p must be an integer, got p={p}")
        if p < self.m:
            raise DomainError(f"need p >= m, got p={p}, m={self.m}")
        if self.q <= 0:
            raise DomainError(f"need q = d - p > 0, got q={self.q}")

    @property
    def r(self) -> Fraction:
        return self.p - self.m

    @property
    def q(self) -> Fraction:
        return self.d - self.p

    @property
    def s(self) -> Fraction:
        return self.q - self.m
