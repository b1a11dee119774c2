"""Period matrices of hyperelliptic curves with real branch points.

Homology convention: the A_k cycle encircles the branch cut
[a_{2k-1}, a_{2k}] (k = 1..g) and the B_k cycle passes through cut k and
the last cut [a_{2g+1}, a_{2g+2}], running along the real axis on the two
sheets.  All periods of the monomial differentials x^(j-1) dx / y then
reduce to real segment integrals between consecutive branch points:

    A_periods[k][j] = 2i (-1)^(g+1+k) * I_j(cut k)
    B_periods[k][j] = 2 sum_{m=k}^{g} (-1)^(g-m) * I_j(gap m)

where I_j(seg) = int x^j dx / sqrt|prod (x - a_m)| over the segment.  The
segment integrals carry inverse square root endpoint singularities, removed
by x = mid + halfwidth*cos(t); the transformed integrand is evaluated with
the midpoint rule in t (Gauss-Chebyshev nodes), doubling the node count
until the change is below tolerance.

For curves with all branch points real this basis yields a purely
imaginary tau.  If the global orientation came out reversed (negative
definite Im tau), all B cycles are flipped, which negates tau.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curves import HyperellipticCurve
from .errors import InvalidPeriodMatrixError, NumericFailureError, QuadratureError
from .theta import PeriodMatrix

_N_START = 32
_N_MAX = 1 << 17

_PHASE = (1.0, -1.0j, -1.0, 1.0j)  # (-i)^r for r mod 4


def segment_phase(curve: HyperellipticCurve, seg: int) -> complex:
    """Value of 1/y on segment ``seg`` divided by 1/sqrt|prod|.

    ``seg`` is 1-based: segment i runs from a_i to a_{i+1}.  On the upper
    side of the real axis the reference branch is i^r sqrt|prod| with r the
    number of branch points to the right, so 1/y contributes (-i)^r.
    """
    r = 2 * curve.g + 2 - seg
    return _PHASE[r % 4]


def segment_integrals(curve: HyperellipticCurve, seg: int, tol: float) -> np.ndarray:
    """int_{a_seg}^{a_seg+1} x^j dx / sqrt|prod(x - a_m)| for j = 0..g-1.

    Gauss-Chebyshev in t after x = mid + h cos(t), node doubling until all
    g integrals move by less than tol (absolute plus relative).
    """
    a = curve.a
    lo, hi = a[seg - 1], a[seg]
    mid, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
    others = np.delete(a, [seg - 1, seg])
    g = curve.g

    def estimate(n: int) -> np.ndarray:
        t = np.pi * (np.arange(n) + 0.5) / n
        x = mid + h * np.cos(t)
        rest = np.sqrt(np.abs(np.prod(x[:, None] - others, axis=1)))
        powers = x[None, :] ** np.arange(g)[:, None]
        return (np.pi / n) * (powers / rest).sum(axis=1)

    n = _N_START
    prev = estimate(n)
    while n <= _N_MAX:
        n *= 2
        cur = estimate(n)
        if np.all(np.abs(cur - prev) <= tol * (1.0 + np.abs(cur))):
            return cur
        prev = cur
    raise QuadratureError(
        f"segment [{lo}, {hi}] did not converge below {tol:.1e} "
        f"with {_N_MAX} nodes"
    )


@dataclass
class PeriodData:
    """Periods of a curve: raw A/B integrals, tau and the normalizing basis.

    ``basis_change`` C maps the monomial differentials to the normalized
    ones, v_j = sum_m C[j,m] x^(m-1) dx / y, so that
    A_periods @ C.T = identity.  ``delta`` (the divisor-class calibration
    vector) and ``w_images`` (Abel-Jacobi images of the branch points) are
    filled lazily by the calibration step.
    """

    A_periods: np.ndarray
    B_periods: np.ndarray
    tau: PeriodMatrix
    basis_change: np.ndarray
    eps: float
    delta: np.ndarray | None = None
    w_images: np.ndarray | None = None
    base_index: int = field(default=1)

    @property
    def g(self) -> int:
        return self.tau.g


def periods(curve: HyperellipticCurve, eps: float = 1e-12) -> PeriodData:
    """Compute the period data of ``curve`` to tolerance ``eps``."""
    g = curve.g
    tol = max(float(eps) / 8.0, 1e-15)
    cut_ints = np.stack(
        [segment_integrals(curve, 2 * k - 1, tol) for k in range(1, g + 1)]
    )  # shape (g cuts, g powers)
    gap_ints = np.stack(
        [segment_integrals(curve, 2 * m, tol) for m in range(1, g + 1)]
    )

    a_mat = np.zeros((g, g), dtype=complex)
    b_mat = np.zeros((g, g), dtype=complex)
    for k in range(1, g + 1):
        a_mat[k - 1] = 2j * (-1.0) ** (g + 1 + k) * cut_ints[k - 1]
        acc = np.zeros(g, dtype=complex)
        for m in range(k, g + 1):
            acc += (-1.0) ** (g - m) * gap_ints[m - 1]
        b_mat[k - 1] = 2.0 * acc

    basis_change = np.linalg.inv(a_mat.T)
    tau = basis_change @ b_mat.T

    y = tau.imag
    if np.linalg.eigvalsh(0.5 * (y + y.T))[0] < 0.0:
        b_mat = -b_mat
        tau = -tau
    try:
        pm = PeriodMatrix(tau)
    except InvalidPeriodMatrixError as exc:
        raise NumericFailureError(
            f"period matrix failed validation after orientation fixing: {exc}"
        ) from exc
    return PeriodData(a_mat, b_mat, pm, basis_change, float(eps))
