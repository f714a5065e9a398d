"""Terminating generalized hypergeometric series at rational argument.

Also provides the Carlitz, Chu and Gauss reduction identities as
``(lhs, rhs)`` pairs so callers can inspect a failing case directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import NotTerminating, PoleBeforeTermination, PoleError
from .exact import as_rational, gamma_ratio, is_nonpositive_integer, pochhammer

__all__ = [
    "HypSeries",
    "termination_index",
    "evaluate_terminating",
    "hyp",
    "is_one_balanced",
    "gauss_2F1_unity",
    "carlitz_4F3",
    "carlitz_series",
    "carlitz_admissible",
    "chu_reduction_pair",
]


@dataclass(frozen=True)
class HypSeries:
    top: tuple[Fraction, ...]
    bottom: tuple[Fraction, ...]
    argument: Fraction = Fraction(1)

    def __init__(self, top: Sequence, bottom: Sequence, argument=1):
        object.__setattr__(self, "top", tuple(as_rational(a) for a in top))
        object.__setattr__(self, "bottom", tuple(as_rational(b) for b in bottom))
        object.__setattr__(self, "argument", as_rational(argument))

    def __str__(self) -> str:
        t = ", ".join(map(str, self.top))
        b = ", ".join(map(str, self.bottom))
        return f"{len(self.top)}F{len(self.bottom)}({t}; {b}; {self.argument})"


def termination_index(s: HypSeries) -> int:
    """Smallest ``N`` such that a top parameter equals ``-N``."""
    candidates = [int(-a) for a in s.top if is_nonpositive_integer(a)]
    if not candidates:
        raise NotTerminating(f"{s} has no nonpositive-integer top parameter")
    return min(candidates)


def evaluate_terminating(s: HypSeries) -> Fraction:
    N = termination_index(s)
    for b in s.bottom:
        if is_nonpositive_integer(b) and -b < N:
            # (b)_k vanishes for k > -b, which is reached before the series stops
            raise PoleBeforeTermination(f"bottom parameter {b} of {s} vanishes before index {N}")
    total = Fraction(0)
    term = Fraction(1)
    z = s.argument
    for k in range(N + 1):
        total += term
        if k == N:
            break
        num = z
        for a in s.top:
            num *= a + k
        den = k + 1
        for b in s.bottom:
            den *= b + k
        term = term * num / den
    return total


def hyp(top: Sequence, bottom: Sequence, z=1) -> Fraction:
    """Shorthand for ``evaluate_terminating(HypSeries(top, bottom, z))``."""
    return evaluate_terminating(HypSeries(top, bottom, z))


def is_one_balanced(s: HypSeries) -> bool:
    return sum(s.bottom, Fraction(0)) == 1 + sum(s.top, Fraction(0))


def gauss_2F1_unity(N: int, b, c) -> Fraction:
    """Gauss summation ``2F1(-N, b; c; 1) = (c - b)_N / (c)_N``."""
    b, c = as_rational(b), as_rational(c)
    den = pochhammer(c, N)
    if den == 0:
        raise PoleError(f"(c)_N vanishes for c={c}, N={N}")
    return pochhammer(c - b, N) / den


def carlitz_series(n: int, h: int, j: int, m) -> HypSeries:
    """The 4F3 obtained at ``p = m + 1/2``, ``d = 2m``."""
    m = as_rational(m)
    half = Fraction(1, 2)
    return HypSeries(
        top=(-(n - h), m + h - j, m + h - j + half, 2 * m - n + h - 2 * j - 1),
        bottom=(m - n + h - j, m - n + h - j + half, 2 * m + 2 * h - 2 * j),
    )


def carlitz_admissible(n: int, h: int, j: int, m) -> bool:
    """Whether the Carlitz closed form applies as an identity of rationals.

    Excluded are early termination through another top parameter, Gamma
    poles on the right-hand side and a vanishing ``m - j - 1/2``.
    """
    m = as_rational(m)
    s = carlitz_series(n, h, j, m)
    if termination_index(s) != n - h:
        return False
    base = 2 * m - n + h - 2 * j - 1
    if is_nonpositive_integer(base) or is_nonpositive_integer(base - (n - h)):
        return False
    if m - j - Fraction(1, 2) == 0:
        return False
    try:
        evaluate_terminating(s)
    except PoleError:
        return False
    return True


def carlitz_4F3(n: int, h: int, j: int, m) -> tuple[Fraction, Fraction]:
    """Both sides of the Carlitz summation for the moment 4F3."""
    m = as_rational(m)
    half = Fraction(1, 2)
    lhs = evaluate_terminating(carlitz_series(n, h, j, m))
    sign = (-1) ** (n - h)
    base = 2 * m - n + h - 2 * j - 1
    # Gamma(base - (n - h)) / Gamma(base)
    ratio = gamma_ratio(base, -(n - h))
    ratio_factor = Fraction(factorial(2 * n), factorial(n + h))
    den = m - j - half
    if den == 0:
        raise PoleError("m - j - 1/2 vanishes")
    rhs = sign * (m - n + h - j - half) / den * ratio_factor * ratio
    return lhs, rhs


def chu_reduction_pair(N: int, a, c, e) -> tuple[Fraction, Fraction]:
    """Chu's reduction of a balanced terminating 4F3 to a 3F2, both sides."""
    a, c, e = as_rational(a), as_rational(c), as_rational(e)
    lhs = hyp(
        (-N, a - c + N, c / 2, (c + 1) / 2),
        (1 + a - e, e / 2, (e + 1) / 2),
    )
    den = pochhammer(1 + a - e, N) * pochhammer(e, N)
    if den == 0:
        raise PoleError("Chu prefactor denominator vanishes")
    pref = pochhammer(1 + a - c - e, N) * pochhammer(e - c, N) / den
    rhs = pref * hyp((-N, a - c + N, c), (c + e - a - N, e + N))
    return lhs, rhs
