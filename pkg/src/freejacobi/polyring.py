"""Polynomials in ``(j, k)`` over Q, polynomials in ``d`` over that ring.

``BivarPoly`` is sparse (a dict keyed by exponent pairs), ``DPoly`` is dense
in ``d``.  Long division only ever needs a divisor with a *scalar* leading
coefficient, so the quotient stays polynomial in ``(j, k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import DegreeError, NonScalarLeadingCoefficient
from .exact import as_rational

__all__ = [
    "BivarPoly",
    "DPoly",
    "AffineRoot",
    "long_divide",
    "elementary_symmetric",
    "elementary_symmetric_all",
    "complete_homogeneous",
    "complete_homogeneous_all",
    "goulden_greene_sum",
    "product_of_roots",
]

Monomial = tuple[int, int]
Scalar = Union[int, Fraction]


class BivarPoly:
    """Sparse polynomial in ``j`` and ``k`` with exact rational coefficients.

    ``terms`` maps ``(deg_j, deg_k)`` to a nonzero :class:`Fraction`.
    Instances are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> "BivarPoly":
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, c: Scalar) -> "BivarPoly":
        return cls({(0, 0): as_rational(c)})

    @classmethod
    def j(cls) -> "BivarPoly":
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def k(cls) -> "BivarPoly":
        return cls({(0, 1): Fraction(1)})

    @classmethod
    def affine(cls, c0: Scalar, cj: Scalar = 0, ck: Scalar = 0) -> "BivarPoly":
        return cls({(0, 0): as_rational(c0), (1, 0): as_rational(cj), (0, 1): as_rational(ck)})

    # -- queries ---------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0)}

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant polynomial")
        return self.terms.get((0, 0), Fraction(0))

    def coeff(self, a: int, b: int) -> Fraction:
        """Coefficient of ``j**a * k**b``."""
        return self.terms.get((a, b), Fraction(0))

    def deg_j(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    def deg_k(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def coeff_in_j(self, s: int) -> "BivarPoly":
        """Coefficient of ``j**s``, as a polynomial in ``k``."""
        return BivarPoly._raw({(0, b): c for (a, b), c in self.terms.items() if a == s})

    def coeff_in_k(self, s: int) -> "BivarPoly":
        """Coefficient of ``k**s``, as a polynomial in ``j``."""
        return BivarPoly._raw({(a, 0): c for (a, b), c in self.terms.items() if b == s})

    def homogeneous_part(self, deg: int) -> "BivarPoly":
        return BivarPoly._raw({m: c for m, c in self.terms.items() if m[0] + m[1] == deg})

    def __call__(self, j: Scalar, k: Scalar) -> Fraction:
        j, k = as_rational(j), as_rational(k)
        return sum((c * j**a * k**b for (a, b), c in self.terms.items()), Fraction(0))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other) -> "BivarPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return BivarPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return BivarPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "BivarPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "BivarPoly":
        return (-self) + other

    def scale(self, c: Scalar) -> "BivarPoly":
        if not c:
            return BivarPoly._raw({})
        return BivarPoly._raw({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "BivarPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        a_terms, b_terms = self.terms, other.terms
        if len(a_terms) < len(b_terms):
            a_terms, b_terms = b_terms, a_terms
        out: dict[Monomial, Fraction] = {}
        get = out.get
        for (b1, b2), cb in b_terms.items():
            for (a1, a2), ca in a_terms.items():
                m = (a1 + b1, a2 + b2)
                out[m] = get(m, 0) + ca * cb
        return BivarPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BivarPoly":
        out = BivarPoly.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"BivarPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
            mono = "*".join(
                s for s in (
                    "" if a == 0 else ("j" if a == 1 else f"j^{a}"),
                    "" if b == 0 else ("k" if b == 1 else f"k^{b}"),
                ) if s
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _coerce(x) -> BivarPoly:
    if isinstance(x, BivarPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return BivarPoly.constant(x)
    return NotImplemented


_ZERO = BivarPoly()
_ONE = BivarPoly.constant(1)


@dataclass(frozen=True)
class AffineRoot:
    """The affine form ``constant + jc * j + kc * k``."""

    constant: Fraction = Fraction(0)
    jc: Fraction = Fraction(0)
    kc: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("constant", "jc", "kc"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def as_poly(self) -> BivarPoly:
        return BivarPoly.affine(self.constant, self.jc, self.kc)

    def scaled(self, c: Scalar) -> "AffineRoot":
        return AffineRoot(self.constant * c, self.jc * c, self.kc * c)

    def __neg__(self) -> "AffineRoot":
        return self.scaled(-1)

    def __sub__(self, other: "AffineRoot") -> "AffineRoot":
        return AffineRoot(self.constant - other.constant, self.jc - other.jc, self.kc - other.kc)

    def __call__(self, j: Scalar, k: Scalar) -> Fraction:
        return self.constant + self.jc * as_rational(j) + self.kc * as_rational(k)


ZERO_ROOT = AffineRoot()


def _mul_affine(p: BivarPoly, r: AffineRoot) -> BivarPoly:
    """``p * r`` for an affine root, without building a generic product."""
    out: dict[Monomial, Fraction] = {}
    get = out.get
    c0, cj, ck = r.constant, r.jc, r.kc
    for (a, b), c in p.terms.items():
        if c0:
            out[(a, b)] = get((a, b), 0) + c * c0
        if cj:
            m = (a + 1, b)
            out[m] = get(m, 0) + c * cj
        if ck:
            m = (a, b + 1)
            out[m] = get(m, 0) + c * ck
    return BivarPoly._raw({m: c for m, c in out.items() if c})


class DPoly:
    """Dense polynomial in ``d`` whose coefficients are :class:`BivarPoly`.

    ``coeffs[i]`` is the coefficient of ``d**i``; trailing zeros are stripped,
    so the zero polynomial has an empty list and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[BivarPoly | Scalar] = ()):
        cs = [c if isinstance(c, BivarPoly) else BivarPoly.constant(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    @classmethod
    def monomial(cls, i: int, c: BivarPoly | Scalar = 1) -> "DPoly":
        c = c if isinstance(c, BivarPoly) else BivarPoly.constant(c)
        return cls([_ZERO] * i + [c])

    @classmethod
    def linear(cls, lead: Scalar, root: AffineRoot) -> "DPoly":
        """``lead * (d - root)``."""
        return cls([root.as_poly().scale(-as_rational(lead)), BivarPoly.constant(lead)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def leading(self) -> BivarPoly:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def coeff(self, i: int) -> BivarPoly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __iter__(self) -> Iterator[BivarPoly]:
        return iter(self.coeffs)

    def __add__(self, other) -> "DPoly":
        other = _dcoerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return DPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "DPoly":
        return DPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "DPoly":
        return self + (-_dcoerce(other))

    def __rsub__(self, other) -> "DPoly":
        return _dcoerce(other) - self

    def scale(self, c: BivarPoly | Scalar) -> "DPoly":
        return DPoly(x * c for x in self.coeffs)

    def __mul__(self, other) -> "DPoly":
        if isinstance(other, (int, Fraction, BivarPoly)):
            return self.scale(other)
        if not isinstance(other, DPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return DPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for k, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + k] = out[i + k] + a * b
        return DPoly(out)

    __rmul__ = __mul__

    def mul_linear(self, lead: Scalar, root: AffineRoot) -> "DPoly":
        """Multiply by ``lead * (d - root)``; the hot loop of product expansion."""
        lead = as_rational(lead)
        neg = root.scaled(-lead)
        n = len(self.coeffs)
        out = []
        for i in range(n + 1):
            acc = _mul_affine(self.coeffs[i], neg) if i < n else _ZERO
            if i > 0:
                acc = acc + self.coeffs[i - 1].scale(lead)
            out.append(acc)
        return DPoly(out)

    def shift(self, i: int) -> "DPoly":
        """Multiply by ``d**i``."""
        if self.is_zero():
            return DPoly()
        return DPoly([_ZERO] * i + self.coeffs)

    def __call__(self, d: Scalar) -> BivarPoly:
        out = _ZERO
        for c in reversed(self.coeffs):
            out = out * d + c if out else c
        return out

    def evaluate(self, j: Scalar, k: Scalar, d: Scalar) -> Fraction:
        d = as_rational(d)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * d + c(j, k)
        return out

    def __eq__(self, other) -> bool:
        other = _dcoerce(other)
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs))

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*d^{i}" for i, c in enumerate(self.coeffs) if c)
        return f"DPoly({body or '0'})"


def _dcoerce(x) -> DPoly:
    if isinstance(x, DPoly):
        return x
    if isinstance(x, (int, Fraction, BivarPoly)):
        return DPoly([x])
    raise TypeError(f"cannot coerce {type(x).__name__} to DPoly")


def product_of_roots(lead: Scalar, roots: Sequence[AffineRoot]) -> DPoly:
    """Expand ``lead * prod (d - r)``."""
    out = DPoly([as_rational(lead)])
    for r in roots:
        out = out.mul_linear(1, r)
    return out


def long_divide(P: DPoly, D: DPoly, *, quotient_only: bool = False) -> tuple[DPoly, DPoly]:
    """Divide ``P`` by ``D`` in the variable ``d``; returns ``(Q, R)``.

    ``P == D * Q + R`` with ``deg R < deg D``.  The leading coefficient of
    ``D`` must be a nonzero constant.  With ``quotient_only`` the low
    coefficients that can only feed the remainder are never updated and
    ``R`` is returned as the zero polynomial.
    """
    if D.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lead = D.leading()
    if not lead.is_constant():
        raise NonScalarLeadingCoefficient(f"leading coefficient {lead} involves j or k")
    if P.degree < D.degree:
        raise DegreeError(f"deg P = {P.degree} < deg D = {D.degree}")
    inv = 1 / lead.constant_value()
    rem = list(P.coeffs)
    nd = D.degree
    nq = P.degree - nd
    q: list[BivarPoly] = [_ZERO] * (nq + 1)
    for i in range(nq, -1, -1):
        top = rem[i + nd]
        if top.is_zero():
            continue
        c = top.scale(inv)
        q[i] = c
        # only slots >= floor matter for later quotient terms
        floor = nd if quotient_only else 0
        for s in range(nd + 1):
            slot = i + s
            if slot < floor:
                continue
            ds = D.coeffs[s]
            if not ds.is_zero():
                rem[slot] = rem[slot] - c * ds
    Q = DPoly(q)
    R = DPoly() if quotient_only else DPoly(rem[:nd])
    return Q, R


def elementary_symmetric_all(roots: Sequence[AffineRoot], upto: int) -> list[BivarPoly]:
    """``[e_0, ..., e_upto]`` of the roots via the generating product ``prod (1 + r x)``."""
    e = [_ONE] + [_ZERO] * upto
    for r in roots:
        for i in range(upto, 0, -1):
            if not e[i - 1].is_zero():
                e[i] = e[i] + _mul_affine(e[i - 1], r)
    return e


def elementary_symmetric(roots: Sequence[AffineRoot], i: int) -> BivarPoly:
    if i < 0 or i > len(roots):
        raise IndexError(f"e_{i} undefined for {len(roots)} roots")
    return elementary_symmetric_all(roots, i)[i]


def complete_homogeneous_all(roots: Sequence[AffineRoot], upto: int) -> list[BivarPoly]:
    """``[h_0, ..., h_upto]`` from ``h_v = sum_{i=1}^{v} (-1)^(i-1) e_i h_(v-i)``."""
    e = elementary_symmetric_all(roots, min(upto, len(roots)))
    h = [_ONE]
    for v in range(1, upto + 1):
        acc = _ZERO
        for i in range(1, min(v, len(e) - 1) + 1):
            term = e[i] * h[v - i]
            acc = acc + term if i % 2 == 1 else acc - term
        h.append(acc)
    return h


def complete_homogeneous(roots: Sequence[AffineRoot], v: int) -> BivarPoly:
    if v < 0:
        raise IndexError("h_v needs v >= 0")
    return complete_homogeneous_all(roots, v)[v]


def goulden_greene_sum(y: Sequence[AffineRoot], z: Sequence[AffineRoot], C: int) -> BivarPoly:
    """Sum over ``1 <= t_1 <= ... <= t_C <= A`` of ``prod_i (y_{t_i+i-1} - z_{t_i})``.

    ``A = len(y)``; indices past either list read as the zero root.
    Exponential in ``C``; meant as an independent check of the e/h expansion.
    """
    A = len(y)

    def at(seq: Sequence[AffineRoot], i: int) -> AffineRoot:
        return seq[i - 1] if 1 <= i <= len(seq) else ZERO_ROOT

    total = _ZERO
    for taus in combinations_with_replacement(range(1, A + 1), C):
        term = _ONE
        for i, t in enumerate(taus, start=1):
            term = _mul_affine(term, at(y, t + i - 1) - at(z, t))
            if term.is_zero():
                break
        total = total + term
    return total
