"""Typed errors shared across the package."""


class SSRError(Exception):
    """Base class for all errors raised by this package."""


class DivisionByNonInvertible(SSRError, ZeroDivisionError):
    """Division by zero, or by a zero divisor in a split quadratic algebra."""


class DimensionMismatch(SSRError, ValueError):
    """Operands have incompatible shapes or ambient dimensions."""


class InconsistentSystem(SSRError, ValueError):
    """A linear system has no solution."""


class ZeroVector(SSRError, ValueError):
    """A nonzero vector was required."""


class DisagreementError(SSRError, AssertionError):
    """Two independent computations of the same fact disagree.

    Signals an implementation bug or invalid input data, never a
    mathematically valid state.
    """


class NotASquare(SSRError, ValueError):
    """The quartic value is not a square in the base field."""


class ZeroQuartic(SSRError, ValueError):
    """The quartic covariant vanishes, so the requested object is undefined."""


class WrongSquareClass(SSRError, ValueError):
    """The quartic value is not in the requested square class."""


class WrongConstruction(SSRError, ValueError):
    """The operation only applies to a specific construction."""


class InvalidJ(SSRError, ValueError):
    """The supplied endomorphism does not satisfy the required relations."""


class DegenerateForm(SSRError, ValueError):
    """A bilinear form required to be nondegenerate is degenerate."""


class CalibrationFailure(SSRError, AssertionError):
    """No scalar calibration satisfies the required identity globally."""


class NotHeisenbergGraded(SSRError, ValueError):
    """The Lie algebra lacks the required five-block grading data."""


class InvalidHatPoint(SSRError, ValueError):
    """The pair (P, z) does not satisfy Q(P) = lambda * z^2 != 0."""


class InvalidZGenPoint(SSRError, ValueError):
    """The vector does not satisfy mu(v) = 0 and h(v) != 0."""


class NonInvertibleScalar(SSRError, ValueError):
    """The acting scalar is not invertible in the quadratic algebra."""
