"""Exception types shared across the package."""


class CurvesegError(Exception):
    """Base class for all curveseg errors."""


class ParseError(CurvesegError):
    """Raised on malformed polynomial text; carries the offending position."""

    def __init__(self, message, position, expected=None):
        self.position = position
        self.expected = expected
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class ZeroPolynomial(CurvesegError):
    """An operation received the identically-zero polynomial."""


class EmptyDomain(CurvesegError):
    """An interval or box with non-positive width was supplied."""


class NonSquarefree(CurvesegError):
    """A repeated root was detected where a squarefree polynomial was required."""


class VerticalLineComponent(CurvesegError):
    """The curve contains a vertical line, so projection fibers are infinite."""


class GeneralPositionFailure(CurvesegError):
    """No tried shear produced a curve in general position."""

    def __init__(self, message, violations=()):
        self.violations = tuple(violations)
        super().__init__(message)


class NegativeBranchCount(CurvesegError):
    """Branch-count completion produced a negative count; the fiber data is corrupt."""


class ConservationViolation(CurvesegError):
    """Half-branch totals of adjacent fibers disagree."""


class NotRegularValue(CurvesegError):
    """A refinement abscissa fell inside a critical interval."""


class DuplicateAbscissa(CurvesegError):
    """A refinement abscissa collides with an existing sample."""


class CoverTooCoarse(CurvesegError):
    """A box cover produced more boxes than the fiber can contain."""


class ShrinkEpsilon(CurvesegError):
    """Retryable: the current box width cannot separate or classify fiber points."""


class AllDerivativesVanish(CurvesegError):
    """Every vertical derivative vanished at a smooth critical point (upstream bug)."""


class InvalidRange(CurvesegError):
    """A user-supplied x-range endpoint is unusable (e.g. inside a critical interval)."""
