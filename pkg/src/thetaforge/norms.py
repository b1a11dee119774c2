"""Translation-normed versions of theta, J and eta.

||theta||(z) = det(Y)^(1/4) exp(-pi y.Yinv.y) |theta|(z)
||J||(w_1..w_g) = det(Y)^((g+2)/4) exp(-pi sum_k y_k.Yinv.y_k) |J(w_1..w_g)|
||eta||(z) = det(Y)^((g+5)/4) exp(-pi (g+1) y.Yinv.y) |eta|(z)

with y = Im z.  ||theta|| is invariant under full lattice shifts of z;
||J|| and ||eta|| are invariant when every argument lies on the theta
divisor.
"""

from __future__ import annotations

import numpy as np

from .characteristics import Characteristic
from .determinants import (
    eta_det,
    eta_det_log,
    jacobian_points,
    jacobian_points_log,
)
from .errors import DimensionMismatchError
from .theta import _as_period_matrix, _check_eps, _check_z, theta, theta_log


def _gauss_exponent(pm, z) -> float:
    y = np.asarray(z, dtype=complex).imag
    return float(y @ pm.y_inv @ y)


def norm_theta(tau, z, eps: float) -> float:
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    eps = _check_eps(eps)
    val = theta(pm, Characteristic.zero(pm.g), z, eps).value
    return pm.det_y ** 0.25 * np.exp(-np.pi * _gauss_exponent(pm, z)) * abs(val)


def norm_J(tau, ws, eps: float) -> float:
    pm = _as_period_matrix(tau)
    eps = _check_eps(eps)
    ws = [_check_z(pm, w) for w in ws]
    if len(ws) != pm.g:
        raise DimensionMismatchError(f"expected {pm.g} vectors, got {len(ws)}")
    expo = sum(_gauss_exponent(pm, w) for w in ws)
    val = jacobian_points(pm, ws, eps)
    return pm.det_y ** ((pm.g + 2) / 4.0) * np.exp(-np.pi * expo) * abs(val)


def norm_eta(tau, z, eps: float) -> float:
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    eps = _check_eps(eps)
    val = eta_det(pm, z, eps)
    return (
        pm.det_y ** ((pm.g + 5) / 4.0)
        * np.exp(-np.pi * (pm.g + 1) * _gauss_exponent(pm, z))
        * abs(val)
    )


# -- log-domain versions used by the identity verifier -----------------------
#
# The norms are invariant under lattice shifts (on the theta divisor for
# ||J|| and ||eta||), so they may be computed at the reduced representative;
# that keeps every intermediate in range at any genus.


def log_norm_theta(tau, z, eps: float):
    """(log ||theta||(z), reduced |theta|, err) via the reduced representative."""
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    from .theta import lattice_reduce

    z0, _, _ = lattice_reduce(pm, z)
    logv, red_abs, err = theta_log(pm, Characteristic.zero(pm.g), z0, eps)
    log_norm = (
        0.25 * pm.log_det_y - np.pi * _gauss_exponent(pm, z0) + float(logv.real)
    )
    return log_norm, red_abs, err


def log_norm_J(tau, ws, eps: float) -> float:
    pm = _as_period_matrix(tau)
    from .theta import lattice_reduce

    ws0 = [lattice_reduce(pm, _check_z(pm, w))[0] for w in ws]
    logv, _ = jacobian_points_log(pm, ws0, eps)
    expo = sum(_gauss_exponent(pm, w) for w in ws0)
    return (pm.g + 2) / 4.0 * pm.log_det_y - np.pi * expo + float(logv.real)


def log_norm_eta(tau, z, eps: float) -> float:
    pm = _as_period_matrix(tau)
    from .theta import lattice_reduce

    z0, _, _ = lattice_reduce(pm, _check_z(pm, z))
    logv, _ = eta_det_log(pm, z0, eps)
    return (
        (pm.g + 5) / 4.0 * pm.log_det_y
        - np.pi * (pm.g + 1) * _gauss_exponent(pm, z0)
        + float(logv.real)
    )
