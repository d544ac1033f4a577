"""Operational errors raised by the envelope toolkit.

Construction-time invariant violations raise Django's ``ValidationError``;
everything that goes wrong while computing raises one of these.
"""


class InfConvError(Exception):
    """Base class for toolkit errors."""


class ExtRealError(InfConvError, ValueError):
    """A value that is not a real number or +inf (NaN, -inf)."""


class GridBoundsError(InfConvError, IndexError):
    """Index or point outside the grid."""


class InsufficientDataError(InfConvError):
    pass


class ShapeError(InfConvError, ValueError):
    """Point dimension does not match the function or grid."""


class EmptyDomainError(InfConvError):
    """Every sampled value is +inf."""


class BudgetExceededError(InfConvError):
    """Brute-force work above the configured budget."""


class PreconditionError(InfConvError):
    pass


class UnsupportedSpecError(InfConvError):
    """No exact set representation exists for the requested object."""


class AmbiguousProjectionError(InfConvError):
    """Projection set is not a singleton."""


class BoundaryMarginError(InfConvError):
    """Base point too close to the grid edge for the requested radii."""
