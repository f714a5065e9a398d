"""Exception types raised across the package."""


class FreeJacobiError(Exception):
    """Base class for all package errors."""


class DomainError(FreeJacobiError, ValueError):
    """A parameter lies outside the domain of an operation."""


class PoleError(FreeJacobiError, ArithmeticError):
    """A Gamma function or Pochhammer denominator hits a genuine pole."""


class NotTerminating(FreeJacobiError, ValueError):
    """A hypergeometric series has no nonpositive-integer top parameter."""


class PoleBeforeTermination(PoleError):
    """A bottom parameter of a hypergeometric series vanishes before it terminates."""


class NonScalarLeadingCoefficient(FreeJacobiError, ValueError):
    """Long division needs a divisor whose leading coefficient is a constant."""


class DegreeError(FreeJacobiError, ValueError):
    """The dividend has smaller degree than the divisor."""


class MissingCoefficient(FreeJacobiError, KeyError):
    """A coefficient table lacks an entry needed by a moment formula."""
