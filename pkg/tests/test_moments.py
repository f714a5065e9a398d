import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freejacobi.coefficients import LimitParams, build_table
from freejacobi.errors import DomainError, MissingCoefficient, PoleError
from freejacobi.exact import HalfIntegerParams
from freejacobi.moments import (
    HALF_SHIFT_RESOLUTION,
    ExpPoly,
    arcsine_case_moment,
    eigen_rate,
    eval_exact_at_zero,
    finite_moment,
    finite_time_part,
    finite_time_part_hooks,
    finite_time_part_hypergeometric,
    half_shift_moment,
    laguerre_inner_sum,
    laguerre_limit,
    limit_moment,
    limit_stationary,
    limit_time_part,
)
from freejacobi.verify import convergence_errors, half_shift_resolutions

HALF = LimitParams(1, Fraction(1, 2))


def _configs(n_max=4, m_max=6, d_max=14):
    for d in range(2, d_max + 1):
        for twice_p in range(2, 2 * d):
            p = Fraction(twice_p, 2)
            for m in range(1, min(int(p), m_max) + 1):
                for n in range(1, n_max + 1):
                    yield n, HalfIntegerParams(m, p, d)


# -- ExpPoly -----------------------------------------------------------------

def test_exppoly_canonical_form():
    a = ExpPoly.term(Fraction(1, 2), 1) + ExpPoly.term(Fraction(1, 2), 1)
    assert a == ExpPoly.term(1, 1)
    assert not (a - a)
    assert (ExpPoly.constant(2) + 3).constant_part == 5
    with pytest.raises(DomainError):
        ExpPoly.term(1, -1)


def test_exppoly_product_and_evaluation():
    e = (ExpPoly.term(1, 1) + 1) * ExpPoly.term(2, 1, 1)
    assert e == ExpPoly([(2, 2, 1), (2, 1, 1)])
    assert e(0.0) == 0.0
    assert e(1.0) == pytest.approx(2 * math.exp(-2) + 2 * math.exp(-1))
    assert ExpPoly.term(3, 2, 0).at_zero() == 3
    assert ExpPoly.term(3, 2, 1).at_zero() == 0


@settings(max_examples=30)
@given(st.lists(st.tuples(st.fractions(-5, 5, max_denominator=7),
                          st.fractions(0, 6, max_denominator=4),
                          st.integers(0, 3)), max_size=6))
def test_exppoly_json_round_trip(terms):
    e = ExpPoly(terms)
    assert ExpPoly.from_json(e.to_json()) == e
    assert hash(ExpPoly.from_dict(e.to_dict())) == hash(e)


def test_exppoly_json_schema():
    doc = ExpPoly.term(Fraction(-1, 4), 2, 1).to_dict()
    assert doc == {"terms": [{"coef": "-1/4", "rate": "2", "power": 1}]}


# -- finite size -------------------------------------------------------------

def test_n1_single_term():
    hp = HalfIntegerParams(2, 2, 4)
    assert finite_time_part(1, hp) == ExpPoly.term(1, 1)
    fm = finite_moment(1, hp)
    assert fm.stationary == 1
    assert fm(0.0) == 2.0
    assert fm(1.0) == pytest.approx(1 + math.exp(-1))


def test_n1_formula_any_size():
    for m, p, d in [(1, 1, 3), (2, Fraction(5, 2), 7), (3, 4, 9)]:
        hp = HalfIntegerParams(m, p, d)
        expected = ExpPoly.term(m * (1 - Fraction(p) / d), 1) + m * Fraction(p) / d
        assert finite_moment(1, hp).as_exppoly() == expected


def test_eigen_rate():
    assert eigen_rate(1, 0, 4) == 1
    assert eigen_rate(2, 0, 10) == 2 + Fraction(2, 10)


def test_summed_form_matches_hook_form():
    checked = 0
    for n, hp in _configs():
        try:
            a = finite_time_part(n, hp)
        except PoleError:
            continue
        assert a == finite_time_part_hooks(n, hp), (n, hp)
        checked += 1
    assert checked > 500


def test_hypergeometric_form():
    for n, hp in _configs(n_max=3):
        if hp.m >= n and hp.d >= 2 * n:
            assert finite_time_part_hypergeometric(n, hp) == finite_time_part(n, hp)
    with pytest.raises(DomainError):
        finite_time_part_hypergeometric(3, HalfIntegerParams(2, 2, 5))


def test_trace_at_zero():
    for n, hp in _configs():
        try:
            fm = finite_moment(n, hp)
        except PoleError:
            continue
        assert eval_exact_at_zero(fm.time_part) + fm.stationary == hp.m


def test_positivity_window():
    for n, hp in _configs(n_max=3, d_max=10):
        try:
            fm = finite_moment(n, hp)
        except PoleError:
            continue
        for t in (0.0, 0.5, 1.0, 2.0, 5.0):
            assert -1e-9 <= fm(t) <= hp.m + 1e-9, (n, hp, t)


def test_no_zero_rate_time_dependence():
    for n, hp in _configs(n_max=3, d_max=9):
        try:
            tp = finite_time_part(n, hp)
        except PoleError:
            continue
        assert all(rate > 0 for _, rate, _ in tp)


# -- limit -------------------------------------------------------------------

def test_limit_first_moment():
    table = build_table(1, HALF)
    e = limit_moment(1, HALF, table)
    assert e == ExpPoly.term(Fraction(1, 2), 1) + Fraction(1, 2)
    assert e(0.0) == 1.0


def test_arcsine_case_examples():
    assert arcsine_case_moment(1) == ExpPoly([(Fraction(1, 2), 0, 0), (Fraction(1, 2), 1, 0)])
    assert arcsine_case_moment(2) == ExpPoly([
        (Fraction(3, 8), 0, 0), (Fraction(1, 2), 1, 0), (Fraction(1, 8), 2, 0), (Fraction(-1, 4), 2, 1),
    ])


def test_limit_matches_arcsine_case():
    table = build_table(5, HALF)
    for n in range(1, 6):
        assert limit_moment(n, HALF, table) == arcsine_case_moment(n)
        assert limit_stationary(n, HALF, table) == Fraction(math.comb(2 * n, n), 4**n)


def test_limit_moment_starts_at_one():
    params = LimitParams(Fraction(1, 2), Fraction(2, 5))
    table = build_table(4, params)
    for n in range(1, 5):
        assert eval_exact_at_zero(limit_moment(n, params, table)) == 1
        assert all(rate > 0 for _, rate, _ in limit_time_part(n, params, table))


def test_limit_needs_full_table():
    table = build_table(2, HALF)
    with pytest.raises(MissingCoefficient):
        limit_time_part(3, HALF, table)
    with pytest.raises(DomainError):
        limit_time_part(1, LimitParams(1, Fraction(1, 3)), table)


def test_limit_route_independent():
    params = LimitParams(Fraction(3, 4), Fraction(1, 3))
    a = build_table(4, params, "division")
    b = build_table(4, params, "recurrence")
    for n in range(1, 5):
        assert limit_moment(n, params, a) == limit_moment(n, params, b)


def test_finite_moments_approach_limit():
    table = build_table(3, HALF)
    for n in (2, 3):
        errs = [convergence_errors(n, Fraction(1), d, HALF, table) for d in (24, 48, 96)]
        assert errs[0] > errs[1] > errs[2] > 0
        # the error shrinks by about four per doubling of d
        assert errs[2] / errs[1] == pytest.approx(0.25, abs=0.01)


def test_n1_has_no_finite_size_error():
    table = build_table(1, HALF)
    for d in (24, 48, 96):
        assert convergence_errors(1, Fraction(1, 2), d, HALF, table) == 0.0


# -- p = m + 1/2, d = 2m ------------------------------------------------------

def test_half_shift_single_resolution():
    res = half_shift_resolutions()
    assert [k for k, ok in res.items() if ok] == [HALF_SHIFT_RESOLUTION]


def test_half_shift_matches_finite():
    for m in (3, 4):
        for n in range(1, 4):
            hp = HalfIntegerParams(m, Fraction(2 * m + 1, 2), 2 * m)
            assert half_shift_moment(n, m) == finite_moment(n, hp).as_exppoly()


# -- Laguerre limit of the inner sum --------------------------------------------

@pytest.mark.parametrize("h", [1, 3])
def test_inner_sum_converges_within_2_over_m(h):
    for m in (50, 100, 200):
        approx, limit = laguerre_inner_sum(h, 1.0, m), laguerre_limit(h, 1.0)
        assert abs(approx - limit) / abs(limit) < 2 / m


def test_inner_sum_converges_for_h2_h4():
    # L_1^(1)(2) vanishes, so only the absolute error can shrink
    assert laguerre_limit(2, 1.0) == 0.0
    errs = [abs(laguerre_inner_sum(2, 1.0, m)) for m in (50, 100, 200)]
    assert errs[0] > errs[1] > errs[2]
    # for h = 4 the relative error is about 3/m
    for m in (50, 100, 200):
        rel = abs(laguerre_inner_sum(4, 1.0, m) - laguerre_limit(4, 1.0)) / abs(laguerre_limit(4, 1.0))
        assert rel < 4 / m
