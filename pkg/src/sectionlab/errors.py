"""Exception types raised across the package."""


class SectionLabError(Exception):
    """Base class for all package errors."""


class InvalidBody(SectionLabError, ValueError):
    """Body does not contain the origin in its interior, is unbounded, or is malformed."""


class DimError(SectionLabError, ValueError):
    """Operands live in different dimensions."""


class RangeError(SectionLabError, ValueError):
    """A numeric parameter is outside its admissible range."""


class FrameError(SectionLabError, ValueError):
    """A slice direction is not orthogonal to the section normal."""


class BoundaryError(SectionLabError, ValueError):
    """A finite-difference stencil leaves the support of the section function."""


class SmoothnessError(SectionLabError, ValueError):
    """The operation needs a smooth body; mollify first."""


class ResolutionError(SectionLabError, ValueError):
    """Quadrature is too coarse for the requested harmonic degree."""


class PoleError(SectionLabError, ValueError):
    """Fractional order sits on a pole of the Gamma function."""


class PreconditionError(SectionLabError, ValueError):
    """Input violates a stated precondition (e.g. symmetry)."""


class FitError(SectionLabError, ValueError):
    """Exponent fit is degenerate."""


class GateNotMet(SectionLabError):
    """Smallness hypothesis of a stability statement is not satisfied.

    Carries the partially filled report; this is not a violation.
    """

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or f"gate not met for {report.theorem}")


class IllConditioned(UserWarning):
    """Fractional order is close to an integer."""
