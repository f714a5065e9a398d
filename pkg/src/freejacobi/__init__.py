"""Exact moments of the Hermitian Jacobi process and its free limit.

Finite-size moments come from a hook-indexed double sum evaluated in exact
rationals.  Large-size limits are assembled from coefficients ``c[n, h, l]``
obtained by polynomial long division, with symmetric-function and
recurrence routes as independent cross-checks.  A Monte Carlo simulator of
unitary Brownian motion provides a numerical sanity check.
"""

__version__ = "0.1.0"

from .errors import (
    DegreeError,
    DomainError,
    FreeJacobiError,
    MissingCoefficient,
    NonScalarLeadingCoefficient,
    NotTerminating,
    PoleBeforeTermination,
    PoleError,
)
from .exact import HalfIntegerParams, Rational, parse_rational, pochhammer
from .hypergeo import HypSeries, evaluate_terminating, hyp
from .polyring import BivarPoly, DPoly, long_divide
from .coefficients import CoeffTable, LimitParams, build_table, compute_coefficient
from .moments import ExpPoly, finite_moment, limit_moment
from .mc_sim import MCConfig, MCResult, estimate_moments

__all__ = [
    "__version__",
    "BivarPoly",
    "CoeffTable",
    "DPoly",
    "DegreeError",
    "DomainError",
    "ExpPoly",
    "FreeJacobiError",
    "HalfIntegerParams",
    "HypSeries",
    "LimitParams",
    "MCConfig",
    "MCResult",
    "MissingCoefficient",
    "NonScalarLeadingCoefficient",
    "NotTerminating",
    "PoleBeforeTermination",
    "PoleError",
    "Rational",
    "build_table",
    "compute_coefficient",
    "estimate_moments",
    "evaluate_terminating",
    "finite_moment",
    "hyp",
    "limit_moment",
    "long_divide",
    "parse_rational",
    "pochhammer",
]
