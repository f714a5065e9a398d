from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from freejacobi.errors import DomainError, PoleError
from freejacobi.exact import (
    HalfIntegerParams,
    alternating_power_sum,
    bell_gamma,
    binomial,
    format_rational,
    gamma_ratio,
    integer_partitions,
    is_nonpositive_integer,
    laguerre_1_coeffs,
    parse_rational,
    pochhammer,
    reciprocal_gamma_ratio,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
naturals = st.integers(min_value=0, max_value=8)


def test_pochhammer_examples():
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert pochhammer(5, 0) == 1
    assert pochhammer(-2, 3) == 0
    assert pochhammer(-2, 2) == 2


def test_pochhammer_rejects_negative_length():
    with pytest.raises(DomainError):
        pochhammer(1, -1)


@given(rationals, naturals, naturals)
def test_pochhammer_splits(a, m, n):
    assert pochhammer(a, m + n) == pochhammer(a, m) * pochhammer(a + m, n)


def test_binomial():
    assert binomial(6, 2) == 15
    assert binomial(3, 5) == 0
    assert binomial(3, -1) == 0
    with pytest.raises(DomainError):
        binomial(-1, 0)


def test_gamma_ratio_regular_values():
    assert gamma_ratio(3, 2) == 12
    assert gamma_ratio(5, -2) == Fraction(1, 12)
    assert gamma_ratio(Fraction(1, 2), 1) == Fraction(1, 2)
    assert reciprocal_gamma_ratio(3, 2) == Fraction(1, 12)


def test_gamma_ratio_poles():
    # only the denominator at a pole: 1/Gamma vanishes
    assert gamma_ratio(-2, 4) == 0
    with pytest.raises(PoleError):
        gamma_ratio(2, -3)
    # both at poles: limit along a common shift
    assert gamma_ratio(-1, -2) == Fraction(1, 6)
    assert gamma_ratio(-3, 2) == 6


@given(rationals, st.integers(-6, 6), st.integers(-6, 6))
def test_gamma_ratio_splits(a, u, v):
    try:
        whole = gamma_ratio(a, u + v)
        left = gamma_ratio(a, u)
        right = gamma_ratio(a + u, v)
    except PoleError:
        assume(False)
    assume(not is_nonpositive_integer(a + u))
    assert whole == left * right


@pytest.mark.parametrize("a", range(13))
def test_alternating_power_sum(a):
    for b in range(13):
        brute = sum((-1) ** j * j**a * comb(b, j) for j in range(b + 1))
        assert alternating_power_sum(a, b) == brute
        if a < b:
            assert alternating_power_sum(a, b) == 0
        if a == b:
            assert alternating_power_sum(a, b) == (-1) ** a * factorial(a)


def _poly_eval(coeffs, x):
    return sum(c * x**i for i, c in enumerate(coeffs))


@pytest.mark.parametrize("x", [Fraction(0), Fraction(1, 3), Fraction(2), Fraction(-5, 2)])
def test_laguerre_three_term_recurrence(x):
    # (k+1) L_{k+1} = (2k+2-x) L_k - (k+1) L_{k-1} for alpha = 1
    L = [_poly_eval(laguerre_1_coeffs(k), x) for k in range(11)]
    assert L[0] == 1 and L[1] == 2 - x
    for k in range(1, 10):
        assert (k + 1) * L[k + 1] == (2 * k + 2 - x) * L[k] - (k + 1) * L[k - 1]


def test_laguerre_direct_expansion():
    for deg in range(11):
        direct = [Fraction((-1) ** i * comb(deg + 1, deg - i), factorial(i)) for i in range(deg + 1)]
        assert laguerre_1_coeffs(deg) == direct


def test_integer_partitions_count():
    counts = [len(integer_partitions(a)) for a in range(1, 11)]
    assert counts == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    for a in range(1, 8):
        for mult in integer_partitions(a):
            assert sum((i + 1) * v for i, v in enumerate(mult)) == a


@settings(max_examples=40)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1, max_size=10))
def test_bell_gamma_inverts_toeplitz(betas):
    beta = [Fraction(1)] + betas
    gammas = [bell_gamma(betas[:v]) for v in range(len(betas) + 1)]
    for a in range(len(betas) + 1):
        total = sum(beta[a - v] * gammas[v] for v in range(a + 1))
        assert total == (1 if a == 0 else 0)


def test_parse_and_format_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert format_rational(Fraction(3, 4)) == "3/4"
    assert format_rational(Fraction(5)) == "5"
    with pytest.raises(DomainError):
        parse_rational("half")


def test_half_integer_params():
    hp = HalfIntegerParams(2, Fraction(5, 2), 6)
    assert (hp.r, hp.q, hp.s) == (Fraction(1, 2), Fraction(7, 2), Fraction(3, 2))
    for bad in [(0, 1, 3), (2, Fraction(5, 4), 6), (3, 2, 6), (2, 6, 6)]:
        with pytest.raises(DomainError):
            HalfIntegerParams(*bad)
