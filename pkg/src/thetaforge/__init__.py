"""Theta functions on hyperelliptic Jacobians with certified identities."""

from .characteristics import (
    Characteristic,
    Parity,
    is_even,
    parity,
    parse_characteristic,
    reduce_characteristic,
)
from .charsys import (
    FundamentalSystem,
    IndexSet,
    base_characteristic,
    characteristic_of_set,
    fundamental_system,
    is_fundamental,
    sym_diff,
    u_set,
)
from .curves import (
    Divisor,
    HyperellipticCurve,
    SurfacePoint,
    curve_hash,
    new_curve,
    random_point,
    read_curve_file,
    weierstrass_point,
    write_curve_file,
)
from .determinants import eta_det, jacobian_nullwerte, jacobian_points
from .errors import (
    CurveError,
    DimensionMismatchError,
    GenericPositionError,
    InvalidCharacteristicError,
    InvalidPeriodMatrixError,
    InvalidToleranceError,
    NumericFailureError,
    PathError,
    QuadratureError,
    ThetaforgeError,
)
from .jacobian import (
    abel_jacobi,
    calibrate,
    divisor_class,
    half_period,
    lattice_distance,
    weierstrass_class,
)
from .norms import norm_J, norm_eta, norm_theta
from .periods import PeriodData, periods
from .theta import (
    MIN_EPS,
    PeriodMatrix,
    ThetaValue,
    lattice_reduce,
    theta,
    theta_grad,
    theta_hess,
    theta_log,
    truncation_radius,
)
from .verifier import (
    IdentityReport,
    SuiteConfig,
    run_suite,
    verify_cor_products,
    verify_jacobi,
    verify_normed,
    verify_rosenhain,
    verify_thm1,
    verify_thm2,
)

__version__ = "0.1.0"

__all__ = [
    "Characteristic", "Parity", "is_even", "parity", "parse_characteristic",
    "reduce_characteristic",
    "FundamentalSystem", "IndexSet", "base_characteristic",
    "characteristic_of_set", "fundamental_system", "is_fundamental",
    "sym_diff", "u_set",
    "Divisor", "HyperellipticCurve", "SurfacePoint", "curve_hash",
    "new_curve", "random_point", "read_curve_file", "weierstrass_point",
    "write_curve_file",
    "eta_det", "jacobian_nullwerte", "jacobian_points",
    "CurveError", "DimensionMismatchError", "GenericPositionError",
    "InvalidCharacteristicError", "InvalidPeriodMatrixError",
    "InvalidToleranceError", "NumericFailureError", "PathError",
    "QuadratureError", "ThetaforgeError",
    "abel_jacobi", "calibrate", "divisor_class", "half_period",
    "lattice_distance", "weierstrass_class",
    "norm_J", "norm_eta", "norm_theta",
    "PeriodData", "periods",
    "MIN_EPS", "PeriodMatrix", "ThetaValue", "lattice_reduce", "theta",
    "theta_grad", "theta_hess", "theta_log", "truncation_radius",
    "IdentityReport", "SuiteConfig", "run_suite", "verify_cor_products",
    "verify_jacobi", "verify_normed", "verify_rosenhain", "verify_thm1",
    "verify_thm2",
]
