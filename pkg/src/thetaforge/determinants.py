"""Determinant forms built from theta derivatives.

J on points: det(theta_j(w_k)); J on characteristics ("Jacobian
nullwerte"): det of the gradients of theta[alpha_k] at 0; and the bordered
(g+1) x (g+1) determinant eta of second and first derivatives.

Determinants are evaluated with an exactly compensated Leibniz sum
(math.fsum per real/imaginary part).  At these sizes (<= 5 x 5) this is
both fast and bit-for-bit alternating: permuting columns flips the sign
exactly, which LU with partial pivoting cannot promise.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import permutations

import numpy as np

from .characteristics import Characteristic
from .errors import DimensionMismatchError
from .theta import (
    PeriodMatrix,
    _as_period_matrix,
    _check_eps,
    _check_z,
    _eval_raw,
    reduced_eval,
)


@lru_cache(maxsize=None)
def _signed_permutations(n: int):
    out = []
    for perm in permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        out.append((perm, -1.0 if inversions % 2 else 1.0))
    return tuple(out)


def det_compensated(mat: np.ndarray) -> complex:
    """Leibniz determinant with fsum accumulation; exact under column swaps."""
    n = mat.shape[0]
    res = []
    ims = []
    for perm, sgn in _signed_permutations(n):
        prod = complex(sgn)
        for j, pj in enumerate(perm):
            prod *= mat[j, pj]
        res.append(prod.real)
        ims.append(prod.imag)
    return complex(math.fsum(res), math.fsum(ims))


def _grad_columns(pm: PeriodMatrix, ws, eps: float) -> np.ndarray:
    cols = []
    for w in ws:
        w = _check_z(pm, w)
        _, grad, _, _ = _eval_raw(pm, Characteristic.zero(pm.g), w, eps, 1)
        cols.append(grad)
    return np.stack(cols, axis=-1)


def jacobian_points(tau, ws, eps: float) -> complex:
    """J(w_1, ..., w_g) = det(theta_j(w_k)), theta taken at characteristic 0."""
    pm = _as_period_matrix(tau)
    eps = _check_eps(eps)
    ws = list(ws)
    if len(ws) != pm.g:
        raise DimensionMismatchError(f"expected {pm.g} vectors, got {len(ws)}")
    return det_compensated(_grad_columns(pm, ws, eps))


def jacobian_nullwerte(tau, alphas, eps: float) -> complex:
    """det of the matrix with column k the gradient of theta[alpha_k] at 0.

    The value depends on the given representatives of the alpha_k through the
    half-integer shift sign rule; even characteristics simply produce a zero
    column.
    """
    pm = _as_period_matrix(tau)
    eps = _check_eps(eps)
    alphas = list(alphas)
    if len(alphas) != pm.g:
        raise DimensionMismatchError(
            f"expected {pm.g} characteristics, got {len(alphas)}"
        )
    zero = np.zeros(pm.g, dtype=complex)
    cols = []
    for alpha in alphas:
        _, grad, _, _ = _eval_raw(pm, alpha, zero, eps, 1)
        cols.append(grad)
    return det_compensated(np.stack(cols, axis=-1))


def _bordered(hess: np.ndarray, grad: np.ndarray) -> np.ndarray:
    g = grad.shape[0]
    mat = np.zeros((g + 1, g + 1), dtype=complex)
    mat[:g, :g] = hess
    mat[:g, g] = grad
    mat[g, :g] = grad
    return mat


def eta_det(tau, z, eps: float) -> complex:
    """Bordered determinant det [[theta_jk(z), theta_j(z)], [theta_k(z), 0]].

    Even in z: negating z flips the sign of the last row and column, which
    leaves the determinant unchanged.
    """
    pm = _as_period_matrix(tau)
    z = _check_z(pm, z)
    eps = _check_eps(eps)
    _, grad, hess, _ = _eval_raw(pm, Characteristic.zero(pm.g), z, eps, 2)
    return det_compensated(_bordered(hess, grad))


# -- numerically stable log variants -----------------------------------------
#
# For arguments far from the fundamental cell the raw series over/underflows.
# The quasi-periodicity transformation laws are exact:
#   theta(z)    = F theta(z0)
#   theta_j(z)  = F (theta_j(z0) - 2 pi i m_j theta(z0))
#   theta_jk(z) = F (theta_jk - 2pi i m_j theta_k - 2pi i m_k theta_j
#                    + (2pi i)^2 m_j m_k theta)(z0)
# with z = z0 + tau m + n, so J and eta at z are assembled from reduced
# evaluations with the scale factors carried in log form.


def jacobian_points_log(tau, ws, eps: float):
    """(log J(w_1..w_g), min column gradient magnitude); stable for shifted w."""
    pm = _as_period_matrix(tau)
    eps = _check_eps(eps)
    ws = list(ws)
    if len(ws) != pm.g:
        raise DimensionMismatchError(f"expected {pm.g} vectors, got {len(ws)}")
    zero_char = Characteristic.zero(pm.g)
    log_scale = 0.0 + 0.0j
    cols = []
    for w in ws:
        _, m, logf, value, grad, _, _ = reduced_eval(pm, zero_char, w, eps, 1)
        log_scale += logf
        cols.append(grad - 2j * np.pi * m * value)
    mat = np.stack(cols, axis=-1)
    det = det_compensated(mat)
    if det == 0:
        return complex(-np.inf), 0.0
    col_scale = float(np.min(np.max(np.abs(mat), axis=0)))
    return log_scale + complex(np.log(det)), col_scale


def eta_det_log(tau, z, eps: float):
    """(log eta(z), |inner det|); stable for lattice-shifted arguments."""
    pm = _as_period_matrix(tau)
    eps = _check_eps(eps)
    _, m, logf, value, grad, hess, _ = reduced_eval(
        pm, Characteristic.zero(pm.g), z, eps, 2
    )
    v = 2j * np.pi * m
    hess_s = hess - np.outer(v, grad) - np.outer(grad, v) + value * np.outer(v, v)
    grad_s = grad - value * v
    det = det_compensated(_bordered(hess_s, grad_s))
    if det == 0:
        return complex(-np.inf), 0.0
    return (pm.g + 1) * logf + complex(np.log(det)), abs(det)
