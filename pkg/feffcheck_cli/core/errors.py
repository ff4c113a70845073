"""
Exception hierarchy for feffcheck.

Library code raises these; the command layer maps them to exit codes.
"""


class FeffcheckError(Exception):
    """Base class for every error raised by feffcheck."""


class SingularPoint(FeffcheckError):
    """A field was evaluated at one of its declared poles."""

    def __init__(self, point, exponent=None):
        self.point = tuple(float(c) for c in point)
        self.exponent = exponent
        message = f"point {self.point} is a declared pole"
        if exponent is not None:
            message += f" (local exponent {exponent:g})"
        super().__init__(message)


class DimensionMismatch(FeffcheckError):
    """A point, ball or field has the wrong dimension."""

    def __init__(self, expected: int, got: int, what: str = "point"):
        self.expected = expected
        self.got = got
        super().__init__(f"{what} has dimension {got}, expected {expected}")


class BoundaryPoint(FeffcheckError):
    """A finite-difference stencil leaves the box of a grid field."""


class ParameterOutOfRange(FeffcheckError):
    """Parameters violate the preconditions of an operation."""


class NormInconclusive(FeffcheckError):
    """A Morrey-type norm could not be estimated to the requested tolerance."""

    def __init__(self, center, radius, error_estimate):
        self.center = tuple(float(c) for c in center)
        self.radius = float(radius)
        self.error_estimate = float(error_estimate)
        super().__init__(
            f"quadrature inconclusive on B({self.center}, {self.radius:g}) "
            f"(error estimate {self.error_estimate:.3g})"
        )


class ZeroDenominator(FeffcheckError):
    """A ratio was requested whose denominator is below the machine floor."""


class PairTooClose(FeffcheckError):
    """Two kernel poles are closer than the resolvable distance."""


class ConfigError(FeffcheckError):
    """The configuration failed to parse or validate."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class TailBoundDominates(UserWarning):
    """Truncating a global integral discards more than the allowed share."""
