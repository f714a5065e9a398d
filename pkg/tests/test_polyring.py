import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freejacobi.errors import DegreeError, NonScalarLeadingCoefficient
from freejacobi.polyring import (
    AffineRoot,
    BivarPoly,
    DPoly,
    complete_homogeneous,
    complete_homogeneous_all,
    elementary_symmetric,
    elementary_symmetric_all,
    goulden_greene_sum,
    long_divide,
    product_of_roots,
)

J, K = BivarPoly.j(), BivarPoly.k()
small = st.fractions(min_value=-6, max_value=6, max_denominator=5)
const_roots = st.lists(small.map(lambda c: AffineRoot(c)), max_size=8)


def _rand_bivar(rng: random.Random, terms: int = 3, deg: int = 2) -> BivarPoly:
    return BivarPoly({(rng.randint(0, deg), rng.randint(0, deg)): Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                      for _ in range(terms)})


def test_bivar_arithmetic():
    p = (J + 1) * (K - 2)
    assert p == J * K - 2 * J + K - 2
    assert p(3, 5) == 12
    assert (J + K) ** 2 == J * J + 2 * J * K + K * K
    assert p.deg_j() == 1 and p.deg_k() == 1 and p.total_degree() == 2
    assert p.coeff(1, 1) == 1 and p.coeff(2, 0) == 0
    assert p.coeff_in_j(1) == K - 2
    assert p.homogeneous_part(1) == K - 2 * J
    assert (p - p).is_zero()
    assert hash(J + 1) == hash(1 + J)


def test_bivar_str_and_constants():
    assert BivarPoly.constant(3).is_constant()
    assert BivarPoly.constant(Fraction(1, 2)).constant_value() == Fraction(1, 2)
    assert str(BivarPoly()) == "0"


def test_dpoly_evaluate_and_mul_linear():
    r = AffineRoot(1, 2, -1)  # 1 + 2j - k
    p = DPoly.linear(3, r)    # 3(d - r)
    assert p.degree == 1
    assert p.evaluate(1, 1, 5) == 3 * (5 - 2)
    q = DPoly([1]).mul_linear(3, r)
    assert q == p
    assert product_of_roots(2, [r, AffineRoot(4)]).evaluate(0, 0, 1) == 2 * (1 - 1) * (1 - 4)


def test_long_divide_exact_multiple():
    D = product_of_roots(2, [AffineRoot(1), AffineRoot(0, 1)])
    Q = DPoly([J + K, BivarPoly.constant(3)])
    P = D * Q
    q, r = long_divide(P, D)
    assert q == Q and r.is_zero()


@pytest.mark.parametrize("seed", range(100))
def test_long_divide_round_trip(seed):
    rng = random.Random(seed)
    dd = rng.randint(0, 4)
    dp = rng.randint(dd, dd + 4)
    D = DPoly([_rand_bivar(rng) for _ in range(dd)] + [BivarPoly.constant(rng.choice([1, -2, Fraction(3, 5)]))])
    P = DPoly([_rand_bivar(rng) for _ in range(dp)] + [_rand_bivar(rng) + 1])
    if P.degree < D.degree:
        return
    Q, R = long_divide(P, D)
    assert D * Q + R == P
    assert R.degree < D.degree
    Q_fast, _ = long_divide(P, D, quotient_only=True)
    assert Q_fast == Q


def test_long_divide_errors():
    with pytest.raises(NonScalarLeadingCoefficient):
        long_divide(DPoly([1, 1, 1]), DPoly([1, J]))
    with pytest.raises(DegreeError):
        long_divide(DPoly([1]), DPoly([1, 1]))
    with pytest.raises(ZeroDivisionError):
        long_divide(DPoly([1]), DPoly())


@settings(max_examples=60)
@given(const_roots)
def test_e_h_generating_identity(roots):
    V = 8
    e = elementary_symmetric_all(roots, V)
    h = complete_homogeneous_all(roots, V)
    for total in range(1, V + 1):
        s = BivarPoly()
        for v in range(total + 1):
            term = e[v] * h[total - v]
            s = s + term if v % 2 == 0 else s - term
        assert s.is_zero()


def test_symmetric_small_values():
    roots = [AffineRoot(1), AffineRoot(2), AffineRoot(3)]
    assert elementary_symmetric(roots, 2).constant_value() == 11
    assert complete_homogeneous(roots, 2).constant_value() == 25
    with pytest.raises(IndexError):
        elementary_symmetric(roots, 4)


@settings(max_examples=40)
@given(const_roots, small.filter(bool))
def test_homogeneity(roots, alpha):
    scaled = [r.scaled(alpha) for r in roots]
    for i in range(len(roots) + 1):
        assert elementary_symmetric(scaled, i) == elementary_symmetric(roots, i).scale(alpha**i)
    for v in range(5):
        assert complete_homogeneous(scaled, v) == complete_homogeneous(roots, v).scale(alpha**v)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_goulden_greene(data):
    A = data.draw(st.integers(1, 6))
    B = data.draw(st.integers(0, A))
    C = data.draw(st.integers(0, 4))
    y = [AffineRoot(data.draw(small)) for _ in range(A)]
    z = [AffineRoot(data.draw(small)) for _ in range(B)]
    e = elementary_symmetric_all(y, C)
    h = complete_homogeneous_all([-r for r in z], C)
    expected = BivarPoly()
    for v in range(C + 1):
        expected = expected + h[v] * e[C - v]
    assert goulden_greene_sum(y, z, C) == expected


def test_goulden_greene_with_affine_roots():
    y = [AffineRoot(1, 1), AffineRoot(0, 0, 1), AffineRoot(2, -1, 1)]
    z = [AffineRoot(3, 0, 1), AffineRoot(1, 1)]
    e = elementary_symmetric_all(y, 2)
    h = complete_homogeneous_all([-r for r in z], 2)
    assert goulden_greene_sum(y, z, 2) == h[0] * e[2] + h[1] * e[1] + h[2] * e[0]
