"""Exception types shared across the package."""


class ThetaforgeError(Exception):
    """Base class for all thetaforge errors."""


class InvalidCharacteristicError(ThetaforgeError, ValueError):
    """Characteristic entries are not half-integers or shapes disagree."""


class InvalidPeriodMatrixError(ThetaforgeError, ValueError):
    """Matrix is not symmetric with positive definite imaginary part."""


class InvalidToleranceError(ThetaforgeError, ValueError):
    """Requested tolerance is non-positive or below the supported floor."""


class DimensionMismatchError(ThetaforgeError, ValueError):
    """Vector or matrix dimensions do not match the ambient genus."""


class CurveError(ThetaforgeError, ValueError):
    """Branch point data does not define a usable hyperelliptic curve."""


class QuadratureError(ThetaforgeError, ArithmeticError):
    """Node doubling failed to converge to the requested tolerance."""


class PathError(ThetaforgeError, RuntimeError):
    """No admissible integration path could be constructed."""


class GenericPositionError(ThetaforgeError, RuntimeError):
    """Sampled points are too close to a special locus; resample advised."""


class NumericFailureError(ThetaforgeError, ArithmeticError):
    """A numeric consistency gate failed (orientation, calibration, sign)."""
