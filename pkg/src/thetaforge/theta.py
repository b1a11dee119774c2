"""Riemann theta functions with characteristics and certified truncation.

The series for theta[alpha](z; tau) and its term-wise z-derivatives are
summed over the lattice points inside the ellipsoid |Y^(1/2)(n + c)| <= R,
where Y = Im(tau) and c = alpha' + Y^(-1) Im(z) is the Gaussian center of
the summand magnitudes.  The radius R carries a certificate: the omitted
tail is bounded by a Gaussian-tail integral driven by the smallest
eigenvalue of Y, so every returned value comes with a rigorous absolute
error bound (up to binary64 rounding).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import gamma as _gamma_fn, gammaincc

from .characteristics import Characteristic, reduce_characteristic
from .errors import (
    DimensionMismatchError,
    InvalidPeriodMatrixError,
    InvalidToleranceError,
    NumericFailureError,
)

#: Smallest tolerance served by the binary64 evaluator.
MIN_EPS = 1e-13

_SYMMETRY_TOL = 1e-9
_R_FLOOR = 0.6
_MAX_BOX_POINTS = 20_000_000


class PeriodMatrix:
    """Complex symmetric g x g matrix with positive definite imaginary part."""

    def __init__(self, tau, symmetry_tol: float = _SYMMETRY_TOL):
        tau = np.array(tau, dtype=complex)
        if tau.ndim == 0:
            tau = tau.reshape(1, 1)
        if tau.ndim != 2 or tau.shape[0] != tau.shape[1]:
            raise InvalidPeriodMatrixError(f"tau must be square, got {tau.shape}")
        asym = np.max(np.abs(tau - tau.T))
        if asym > symmetry_tol:
            raise InvalidPeriodMatrixError(
                f"tau symmetry residual {asym:.3e} exceeds {symmetry_tol:.1e}"
            )
        y = tau.imag.copy()
        y = 0.5 * (y + y.T)
        lam = np.linalg.eigvalsh(y)
        if lam[0] <= 0.0:
            raise InvalidPeriodMatrixError(
                f"Im(tau) not positive definite (min eigenvalue {lam[0]:.3e})"
            )
        tau.setflags(write=False)
        y.setflags(write=False)
        self.tau = tau
        self.g = tau.shape[0]
        self.y = y
        self.lam_min = float(lam[0])

    @cached_property
    def y_inv(self) -> np.ndarray:
        inv = np.linalg.inv(self.y)
        inv.setflags(write=False)
        return inv

    @cached_property
    def det_y(self) -> float:
        return float(np.linalg.det(self.y))

    @cached_property
    def log_det_y(self) -> float:
        sign, logdet = np.linalg.slogdet(self.y)
        if sign <= 0:
            raise InvalidPeriodMatrixError("det Im(tau) must be positive")
        return float(logdet)

    def __repr__(self):
        return f"PeriodMatrix(g={self.g})"


@dataclass(frozen=True)
class ThetaValue:
    """A computed series value together with its certified absolute error."""

    value: complex
    error_bound: float

    def to_json_dict(self) -> dict:
        return {
            "re": format(self.value.real, ".17e"),
            "im": format(self.value.imag, ".17e"),
            "err": format(self.error_bound, ".17e"),
        }


def _as_period_matrix(tau) -> PeriodMatrix:
    return tau if isinstance(tau, PeriodMatrix) else PeriodMatrix(tau)


def _check_z(pm: PeriodMatrix, z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (pm.g,):
        raise DimensionMismatchError(f"z has shape {z.shape}, expected ({pm.g},)")
    return z


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if eps <= 0.0:
        raise InvalidToleranceError("tolerance must be positive")
    if eps < MIN_EPS:
        raise InvalidToleranceError(
            f"tolerance {eps:.1e} below the binary64 floor {MIN_EPS:.0e}"
        )
    return eps


def _tail_bound(pm: PeriodMatrix, mu: float, big: float, r: float, order: int) -> float:
    """Certified bound on the absolute tail of the (derivative) series.

    Bounds sum over |Y^(1/2)(n+c)| > r of (2 pi |n + alpha'|)^order *
    exp(pi y'Yinv y' - pi |Y^(1/2)(n+c)|^2).  Lattice points at scaled
    distance t are counted by the packing bound (1 + 2t/rho)^g with
    rho = sqrt(lam_min) a lower bound for the shortest vector of Y^(1/2)Z^g,
    and |n + alpha'| <= t/sqrt(lam_min) + mu with mu = |Yinv Im z|.
    """
    g = pm.g
    s = np.sqrt(pm.lam_min)
    rho = s
    # Ascending coefficients of (t/s + mu)^order * (1 + 2t/rho)^(g-1).
    p1 = npoly.polypow([mu, 1.0 / s], order) if order else np.array([1.0])
    p2 = npoly.polypow([1.0, 2.0 / rho], g - 1) if g > 1 else np.array([1.0])
    coeffs = npoly.polymul(p1, p2)
    ks = np.arange(len(coeffs))
    a = (ks + 1) / 2.0
    x = np.pi * r * r
    tail_ints = 0.5 * np.pi ** (-(ks + 1) / 2.0) * gammaincc(a, x) * _gamma_fn(a)
    integral = (2.0 * g / rho) * float(np.dot(coeffs, tail_ints))
    boundary = (r / s + mu) ** order * (1.0 + 2.0 * r / rho) ** g * np.exp(-x)
    return big * (2.0 * np.pi) ** order * (boundary + integral)


def truncation_radius(tau, y_shift, eps: float, deriv_order: int = 0) -> float:
    """Smallest certified radius R with tail error at most eps.

    ``y_shift`` is Im(z) for the evaluation point; it enters through the
    enclosing factor exp(pi y' Yinv y') and the center offset |Yinv y|.
    Monotone: a larger eps never yields a larger radius (up to binary64
    bisection resolution).
    """
    pm = _as_period_matrix(tau)
    eps = _check_eps(eps)
    if deriv_order not in (0, 1, 2):
        raise InvalidToleranceError(f"deriv_order must be 0, 1 or 2, got {deriv_order}")
    y = np.atleast_1d(np.asarray(y_shift, dtype=float))
    if y.shape != (pm.g,):
        raise DimensionMismatchError(f"y_shift has shape {y.shape}, expected ({pm.g},)")
    yinv_y = pm.y_inv @ y
    mu = float(np.linalg.norm(yinv_y))
    big = float(np.exp(np.pi * float(y @ yinv_y)))

    lo = _R_FLOOR
    if _tail_bound(pm, mu, big, lo, deriv_order) <= eps:
        return lo
    hi = max(1.5, 2.0 * lo)
    for _ in range(400):
        if _tail_bound(pm, mu, big, hi, deriv_order) <= eps:
            break
        hi *= 1.5
    else:
        raise NumericFailureError("truncation radius search failed to bracket")
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        if _tail_bound(pm, mu, big, mid, deriv_order) <= eps:
            hi = mid
        else:
            lo = mid
    return hi


def _ellipsoid_points(pm: PeriodMatrix, c: np.ndarray, r: float) -> np.ndarray:
    """Integer points n with |Y^(1/2)(n + c)| <= r, found by box + mask."""
    widths = r * np.sqrt(np.diag(pm.y_inv))
    los = np.ceil(-c - widths).astype(np.int64)
    his = np.floor(-c + widths).astype(np.int64)
    total = np.prod((his - los + 1).astype(float))
    if total > _MAX_BOX_POINTS:
        raise NumericFailureError(
            f"lattice enumeration too large ({total:.2e} candidates); "
            "period matrix too ill-conditioned for binary64 evaluation"
        )
    axes = [np.arange(lo, hi + 1) for lo, hi in zip(los, his)]
    grid = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([ax.ravel() for ax in grid], axis=-1).astype(float)
    v = pts + c
    norms2 = np.einsum("ij,jk,ik->i", v, pm.y, v)
    # Keep boundary points: extra terms only tighten the certificate.
    return pts[norms2 <= r * r * (1.0 + 1e-12) + 1e-12]


def _eval_raw(pm: PeriodMatrix, alpha: Characteristic, z: np.ndarray, eps: float,
              order: int):
    """Shared lattice enumeration for theta, gradient and Hessian.

    Returns (value, grad, hess, errs) where grad/hess are None below the
    requested order and errs[d] certifies every order-d component.
    """
    if alpha.g != pm.g:
        raise DimensionMismatchError(
            f"characteristic genus {alpha.g} != period matrix genus {pm.g}"
        )
    canonical, sign = reduce_characteristic(alpha)
    a1 = canonical.top
    a2 = canonical.bottom
    y = z.imag
    c = a1 + pm.y_inv @ y
    radius = truncation_radius(pm, y, eps, order)
    pts = _ellipsoid_points(pm, c, radius)
    p = pts + a1
    quad = np.einsum("ij,jk,ik->i", p, pm.tau, p)
    lin = p @ (z + a2)
    terms = np.exp(1j * np.pi * quad + 2j * np.pi * lin)
    value = sign * complex(terms.sum())

    yinv_y = pm.y_inv @ y
    mu = float(np.linalg.norm(yinv_y))
    big = float(np.exp(np.pi * float(y @ yinv_y)))
    errs = [_tail_bound(pm, mu, big, radius, d) for d in range(order + 1)]

    grad = None
    hess = None
    if order >= 1:
        grad = sign * 2j * np.pi * (p * terms[:, None]).sum(axis=0)
    if order >= 2:
        hess = sign * (2j * np.pi) ** 2 * np.einsum("i,ij,ik->jk", terms, p, p)
    return value, grad, hess, errs


def theta(tau, alpha: Characteristic, z, eps: float) -> ThetaValue:
    """theta[alpha](z; tau) with certified absolute error at most eps."""
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    eps = _check_eps(eps)
    value, _, _, errs = _eval_raw(pm, alpha, z, eps, 0)
    return ThetaValue(value, errs[0])


def theta_grad(tau, alpha: Characteristic, z, eps: float) -> list:
    """Term-wise gradient d theta[alpha]/dz_j, each component within eps."""
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    eps = _check_eps(eps)
    _, grad, _, errs = _eval_raw(pm, alpha, z, eps, 1)
    return [ThetaValue(complex(v), errs[1]) for v in grad]


def theta_hess(tau, alpha: Characteristic, z, eps: float) -> list:
    """Term-wise Hessian d^2 theta[alpha]/dz_j dz_k; exactly symmetric."""
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    eps = _check_eps(eps)
    _, _, hess, errs = _eval_raw(pm, alpha, z, eps, 2)
    return [[ThetaValue(complex(hess[j, k]), errs[2]) for k in range(pm.g)]
            for j in range(pm.g)]


def lattice_reduce(tau, z):
    """Split z = z0 + tau m + n with integer m, n and small Im(z0).

    The reduced point satisfies |Yinv Im(z0)|_inf <= 1/2 (+ rounding), which
    maximizes truncation efficiency when evaluating theta at z0.
    """
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    m = np.round(pm.y_inv @ z.imag).astype(np.int64)
    zp = z - pm.tau @ m
    n = np.round(zp.real).astype(np.int64)
    z0 = zp - n
    return z0, m, n


def translation_log_factor(pm: PeriodMatrix, alpha: Characteristic,
                           m: np.ndarray, n: np.ndarray, z0: np.ndarray) -> complex:
    """log of the factor F with theta[alpha](z0 + tau m + n) = F theta[alpha](z0).

    F = exp(2 pi i (alpha'.n - alpha''.m)) exp(-pi i m.tau.m - 2 pi i m.z0);
    the identity is exact, so assembling values through it loses nothing.
    """
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    a1 = alpha.top
    a2 = alpha.bottom
    return complex(
        2j * np.pi * (a1 @ n - a2 @ m)
        - 1j * np.pi * (m @ pm.tau @ m)
        - 2j * np.pi * (m @ z0)
    )


def reduced_eval(tau, alpha: Characteristic, z, eps: float, order: int):
    """Evaluate at the lattice-reduced point and return the exact log factor.

    Returns (z0, m, logf, value, grad, hess, errs) with
    theta[alpha](z) = exp(logf) * value and the same factor applying to the
    affine gradient/Hessian transformation laws.
    """
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    z0, m, n = lattice_reduce(pm, z)
    logf = translation_log_factor(pm, alpha, m, n, z0)
    value, grad, hess, errs = _eval_raw(pm, alpha, z0, eps, order)
    return z0, m, logf, value, grad, hess, errs


def theta_log(tau, alpha: Characteristic, z, eps: float):
    """Stable log of theta[alpha](z): returns (log_value, reduced_abs, err).

    ``reduced_abs`` is |theta[alpha](z0)| at the lattice-reduced point and
    ``err`` its certified absolute error; callers use them for genericity
    floors.  ``log_value`` is infinite when the reduced value is exactly 0.
    """
    pm = _as_period_matrix(tau)
    eps = _check_eps(eps)
    _, _, logf, value, _, _, errs = reduced_eval(pm, alpha, z, eps, 0)
    if value == 0:
        return complex(-np.inf), 0.0, errs[0]
    return logf + complex(np.log(complex(value))), abs(value), errs[0]
