"""Abel-Jacobi maps, divisor classes and the Weierstrass calibration.

The Abel-Jacobi image of a branch point is computed by summing the real
segment integrals used for the periods, with the branch phase tracked per
segment.  Ordinary points are reached by a polyline that leaves the base
branch point vertically (a sqrt substitution removes the endpoint
singularity) and then runs straight, detouring around any branch point via
a circular arc; the branch of y is continued numerically along the way.

Divisor classes of degree g-1 divisors are Abel-Jacobi sums shifted by a
calibration vector delta, fixed once per curve so that sums of Weierstrass
points land on the half-periods of their subset characteristics.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .characteristics import Characteristic
from .charsys import IndexSet, characteristic_of_set, sym_diff, u_set
from .curves import (
    Divisor,
    HyperellipticCurve,
    SurfacePoint,
    weierstrass_label,
)
from .errors import (
    CurveError,
    DimensionMismatchError,
    NumericFailureError,
    PathError,
)
from .periods import PeriodData, segment_integrals, segment_phase
from .theta import PeriodMatrix, lattice_reduce

DEFAULT_BASE = 1

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)
_GL_NODES01 = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS01 = 0.5 * _GL_WEIGHTS


def half_period(pm: PeriodMatrix, alpha: Characteristic) -> np.ndarray:
    """The point tau alpha' + alpha'' of the Jacobian."""
    if alpha.g != pm.g:
        raise DimensionMismatchError("characteristic genus disagrees")
    return pm.tau @ alpha.top + alpha.bottom


def lattice_distance(pm: PeriodMatrix, v) -> float:
    """sup-norm distance of v from the period lattice Z^g + tau Z^g."""
    v = np.asarray(v, dtype=complex)
    m = np.round(pm.y_inv @ v.imag)
    r = v - pm.tau @ m
    n = np.round(r.real)
    return float(np.max(np.abs(r - n)))


def weierstrass_class(g: int, t) -> Characteristic:
    """Characteristic of the Weierstrass divisor with support labels ``t``.

    ``t`` of size g-1 stands for the effective divisor W_{j_1}+..+W_{j_{g-1}};
    size g+1 for W_{j_1}+..+W_{j_g} - W_{j_{g+1}}.  Both map to the canonical
    form of eta_{T o U}.
    """
    if not isinstance(t, IndexSet):
        t = IndexSet.of(t, g)
    if len(t.members) not in (g - 1, g + 1):
        raise DimensionMismatchError(
            f"|T| must be g-1 or g+1, got {len(t.members)} at genus {g}"
        )
    return characteristic_of_set(g, sym_diff(t, u_set(g)))


# -- branch point Abel-Jacobi images ------------------------------------------


def _w_image(curve, pd: PeriodData, j: int, base: int, tol: float) -> np.ndarray:
    """Abel-Jacobi image of W_j from W_base along the real axis (upper side)."""
    if j == base:
        return np.zeros(curve.g, dtype=complex)
    lo, hi = (base, j) if base < j else (j, base)
    acc = np.zeros(curve.g, dtype=complex)
    for seg in range(lo, hi):
        acc += segment_phase(curve, seg) * segment_integrals(curve, seg, tol)
    if base > j:
        acc = -acc
    return pd.basis_change @ acc


def ensure_w_images(curve: HyperellipticCurve, pd: PeriodData) -> np.ndarray:
    if pd.w_images is None:
        tol = max(pd.eps / 8.0, 1e-15)
        pd.w_images = np.stack(
            [
                _w_image(curve, pd, j, pd.base_index, tol)
                for j in range(1, 2 * curve.g + 3)
            ]
        )
    return pd.w_images


# -- path integration to ordinary points ---------------------------------------


def _track_signs(values: np.ndarray, start: complex) -> np.ndarray:
    """Continuous branch through a sequence of +-sqrt candidates."""
    flips = np.where(np.real(values[1:] / values[:-1]) < 0.0, -1.0, 1.0)
    signs = np.concatenate([[1.0], np.cumprod(flips)])
    if abs(values[0] - start) > abs(values[0] + start):
        signs = -signs
    return signs


def _panel_params(span, dist_of, z_of, t0: float, t1: float, speed_of) -> list:
    """Split [t0, t1] so each panel moves at most ~0.3x the distance to the
    nearest relevant singularity (keeps the tracked phase step per node small)."""
    panels = []
    t = t0
    for _ in range(4000):
        if t >= t1:
            break
        z = z_of(t)
        dist = max(float(dist_of(z)), 1e-6 * span)
        speed = max(float(speed_of(t)), 1e-12 * span)
        dt = min(t1 - t, 0.3 * dist / speed)
        panels.append((t, min(t1, t + dt)))
        t += dt
    else:
        raise PathError("path subdivision did not terminate")
    return panels


def _integrate_tracked(curve, basis_change, z_of, dz_of, t0, t1, y_start):
    """Integrate the normalized differentials along z(t), tracking sqrt branch.

    Returns (vector integral, y at t1).
    """
    g = curve.g
    panels = _panel_params(
        curve.span,
        lambda z: np.min(np.abs(z - curve.a)),
        z_of, t0, t1,
        lambda t: abs(complex(np.asarray(dz_of(t)).reshape(-1)[0])),
    )
    acc = np.zeros(g, dtype=complex)
    y_cur = y_start
    for (a, b) in panels:
        ts = np.concatenate([[a], a + (b - a) * _GL_NODES01, [b]])
        zs = z_of(ts)
        prods = np.prod(zs[:, None] - curve.a, axis=1)
        w = np.sqrt(prods)
        signs = _track_signs(w, y_cur)
        y_vals = signs * w
        y_cur = y_vals[-1]
        zs_in = zs[1:-1]
        y_in = y_vals[1:-1]
        powers = zs_in[None, :] ** np.arange(g)[:, None]
        integrand = powers / y_in
        dz = dz_of(ts[1:-1])
        acc += (b - a) * (integrand * (dz * _GL_WEIGHTS01)).sum(axis=1)
    return basis_change @ acc, y_cur


def _integrate_sqrt_leg(curve, basis_change, a_b: float, z1: complex):
    """First leg from the base branch point: x = a_b + d s^2, s in [0, 1].

    The substitution removes the 1/sqrt(x - a_b) singularity; the branch of
    sqrt(prod over the other factors) starts at the principal value.
    Returns (vector integral, y at z1) for that branch choice.
    """
    g = curve.g
    d = z1 - complex(a_b)
    others = curve.a[np.abs(curve.a - a_b) > 1e-14 * max(curve.span, 1.0)]
    sqrt_d = np.sqrt(d)

    def x_of(s):
        return a_b + d * s * s

    # Distance rule against the other branch points only: the base point
    # singularity is removed by the substitution.
    panels = _panel_params(
        curve.span,
        lambda z: np.min(np.abs(z - others)),
        x_of,
        0.0,
        1.0,
        lambda s: 2.0 * abs(d) * max(abs(float(s)), 0.25),
    )
    acc = np.zeros(g, dtype=complex)
    w_cur = None
    for (a, b) in panels:
        ss = np.concatenate([[a], a + (b - a) * _GL_NODES01, [b]])
        xs = x_of(ss)
        rest = np.prod(xs[:, None] - others, axis=1)
        w = np.sqrt(rest)
        if w_cur is None:
            signs = _track_signs(w, w[0])
        else:
            signs = _track_signs(w, w_cur)
        w_vals = signs * w
        w_cur = w_vals[-1]
        xs_in = xs[1:-1]
        powers = xs_in[None, :] ** np.arange(g)[:, None]
        # dx / y = 2 d s ds / (s sqrt(d) w) = 2 sqrt(d) ds / w
        integrand = powers * (2.0 * sqrt_d / w_vals[1:-1])
        acc += (b - a) * (integrand * _GL_WEIGHTS01).sum(axis=1)
    y_end = sqrt_d * w_cur  # y(z1) = s sqrt(d) w at s = 1
    return basis_change @ acc, y_end


def _line_waypoints(curve, z0: complex, z1: complex) -> list:
    """Straight segment split by circular detours around close branch points.

    Returns a list of ('line', za, zb) and ('arc', center, radius, t_in, t_out)
    pieces.
    """
    span = curve.span
    gaps = np.diff(curve.a)
    r_det = min(0.01 * span, 0.45 * float(np.min(gaps)))
    d = z1 - z0
    length = abs(d)
    if length == 0:
        return []
    hits = []
    for a in curve.a:
        r_eff = min(r_det, 0.9 * abs(z0 - a), 0.9 * abs(z1 - a))
        if r_eff <= 0:
            raise PathError(f"path endpoint coincides with branch point {a}")
        tstar = np.clip(((a - z0) * np.conj(d)).real / (length * length), 0.0, 1.0)
        dist = abs(z0 + tstar * d - a)
        if dist >= r_eff:
            continue
        # segment-circle intersection parameters
        b_coef = ((z0 - a) * np.conj(d)).real
        c_coef = abs(z0 - a) ** 2 - r_eff * r_eff
        disc = b_coef * b_coef - length * length * c_coef
        if disc <= 0:
            continue
        sq = np.sqrt(disc)
        t_in = (-b_coef - sq) / (length * length)
        t_out = (-b_coef + sq) / (length * length)
        if t_out <= 0.0 or t_in >= 1.0:
            continue
        hits.append((t_in, t_out, a, r_eff))
    hits.sort()
    pieces = []
    cursor = z0
    for t_in, t_out, a, r_eff in hits:
        z_in = z0 + t_in * d
        z_out = z0 + t_out * d
        if abs(z_in - cursor) > 0:
            pieces.append(("line", cursor, z_in))
        th_in = float(np.angle(z_in - a))
        th_out = float(np.angle(z_out - a))
        dth = (th_out - th_in) % (2.0 * np.pi)
        if dth > np.pi:
            dth -= 2.0 * np.pi
        pieces.append(("arc", a, r_eff, th_in, th_in + dth))
        cursor = z_out
    if abs(z1 - cursor) > 0:
        pieces.append(("line", cursor, z1))
    return pieces


def abel_jacobi(curve: HyperellipticCurve, pd: PeriodData, p: SurfacePoint,
                base_index: int = DEFAULT_BASE, eps: float = 1e-10) -> np.ndarray:
    """Integral of the normalized differentials from W_base to ``p``.

    The value is well defined modulo Z^g + tau Z^g: admissible paths differ
    by lattice vectors.
    """
    if p.at_infinity:
        raise CurveError("Abel-Jacobi to points at infinity is not supported")
    if not 1 <= base_index <= 2 * curve.g + 2:
        raise CurveError(f"base index {base_index} out of range")
    tol = max(eps / 8.0, 1e-15)
    label = weierstrass_label(curve, p)
    if label is not None:
        return _w_image(curve, pd, label, base_index, tol)

    a_b = curve.branch_points[base_index - 1]
    span = curve.span
    s = 1.0 if p.x.imag >= 0 else -1.0
    w1 = complex(a_b, s * 0.35 * span)
    if abs(w1 - p.x) < 1e-12 * span:
        w1 = complex(a_b, s * 0.2 * span)

    u_acc, y_cur = _integrate_sqrt_leg(curve, pd.basis_change, a_b, w1)
    for piece in _line_waypoints(curve, w1, p.x):
        if piece[0] == "line":
            _, za, zb = piece

            def z_line(t, za=za, zb=zb):
                return za + t * (zb - za)

            vec, y_cur = _integrate_tracked(
                curve, pd.basis_change, z_line,
                lambda t, za=za, zb=zb: np.full_like(np.asarray(t, dtype=complex),
                                                     zb - za),
                0.0, 1.0, y_cur,
            )
        else:
            _, center, radius, t_in, t_out = piece

            def z_arc(t, center=center, radius=radius):
                return center + radius * np.exp(1j * np.asarray(t))

            vec, y_cur = _integrate_tracked(
                curve, pd.basis_change, z_arc,
                lambda t, radius=radius: 1j * radius * np.exp(1j * np.asarray(t)),
                t_in, t_out, y_cur,
            )
        u_acc = u_acc + vec

    # The continuation fixed a branch implicitly; flip to the requested sheet.
    from .curves import point_y

    target = point_y(curve, p)
    if abs(y_cur - target) <= abs(y_cur + target):
        return u_acc
    return -u_acc


def calibrate(curve: HyperellipticCurve, pd: PeriodData,
              tol: float = 1e-8) -> np.ndarray:
    """Fix the divisor-class shift delta and validate the branch point table.

    delta is chosen so the empty/first Weierstrass divisor lands on its
    subset characteristic; every other subset T with |T| in {g-1, g+1} is
    then checked to land on the half-period of its characteristic modulo
    the lattice.
    """
    g = curve.g
    pm = pd.tau
    w = ensure_w_images(curve, pd)

    t0 = tuple(range(1, g))  # {1, .., g-1}; empty at genus 1
    target = half_period(pm, weierstrass_class(g, t0))
    delta_raw = target - sum(
        (w[j - 1] for j in t0), np.zeros(g, dtype=complex)
    )
    delta, _, _ = lattice_reduce(pm, delta_raw)
    worst = 0.0
    for size in (g - 1, g + 1):
        for t in combinations(range(1, 2 * g + 3), size):
            phi = sum((w[j - 1] for j in t), np.zeros(g, dtype=complex)) + delta
            resid = lattice_distance(pm, phi - half_period(pm, weierstrass_class(g, t)))
            worst = max(worst, resid)
    if worst > tol:
        raise NumericFailureError(
            f"Weierstrass calibration residual {worst:.3e} exceeds {tol:.1e}"
        )
    pd.delta = delta
    return delta


def ensure_calibrated(curve: HyperellipticCurve, pd: PeriodData) -> PeriodData:
    if pd.delta is None:
        calibrate(curve, pd)
    return pd


def divisor_class(curve: HyperellipticCurve, pd: PeriodData, d: Divisor,
                  eps: float = 1e-10) -> np.ndarray:
    """phi(D) for a degree g-1 divisor D of finite points.

    phi(D) = sum of weighted Abel-Jacobi images plus the calibration shift;
    effective divisors land on the zero set of theta.
    """
    if d.degree != curve.g - 1:
        raise DimensionMismatchError(
            f"divisor degree {d.degree} != g-1 = {curve.g - 1}"
        )
    ensure_calibrated(curve, pd)
    w = ensure_w_images(curve, pd)
    acc = pd.delta.astype(complex).copy()
    for point, weight in d.terms:
        if weight == 0:
            continue
        label = weierstrass_label(curve, point)
        if label is not None:
            u = w[label - 1]
        else:
            u = abel_jacobi(curve, pd, point, pd.base_index, eps)
        acc = acc + weight * u
    return acc
