"""Exception hierarchy shared by all modules.

Two families matter for the CLI exit codes: ``ConfigError`` (bad input,
exit 2) and ``NumericalError`` (a solver or quadrature gave up, exit 3).
Domain errors are raised for evaluation points outside the region where a
function is defined or continued.
"""


class GzntError(Exception):
    """Base class for everything raised by this package."""


class ConfigError(GzntError):
    """Malformed function spec, measure schema or CLI argument."""


class DomainError(GzntError):
    """Evaluation point outside the domain of definition/continuation."""


class PoleHit(DomainError):
    """Evaluation at (or numerically on top of) a pole."""


class ZeroDenominator(DomainError):
    """Moebius transform with tau=inf evaluated at a zero of Q."""


class AtomCollision(DomainError):
    """Evaluation exactly at a point mass of the measure."""


class AmbiguousBoundary(GzntError):
    """Query point sits exactly on a density-piece endpoint."""


class NotAZero(GzntError):
    """Local case analysis requested at a point that is not a zero."""


class InsufficientSamples(GzntError):
    """Not enough path samples inside the requested fit window."""


class NumericalError(GzntError):
    """Base class for numerical failures (CLI exit code 3)."""


class NoConvergence(NumericalError):
    """Iteration or extrapolation did not reach its target tolerance."""


class PathLost(NumericalError):
    """Continuation failed after repeated step refinements."""


class NotNonpositiveType(NumericalError):
    """Root finding only produced inadmissible (positive-derivative) real roots."""


class Unclassifiable(NumericalError):
    """A decision quantity fell inside the tolerance dead band."""
