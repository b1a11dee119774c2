"""Hyperelliptic curves y^2 = prod (x - a_i) with real ordered branch points.

The 2g+2 branch points are real and strictly increasing; the branch cuts
pair them as [a_1, a_2], [a_3, a_4], ..., [a_{2g+1}, a_{2g+2}].  The
reference branch of y is the one positive for real x to the right of all
branch points, continued through the cut plane; ``y_branch`` evaluates it
(on the cuts themselves it returns the limit from the upper half plane).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CurveError

_MIN_GAP_FACTOR = 1e-6


@dataclass(frozen=True)
class HyperellipticCurve:
    branch_points: tuple

    @property
    def g(self) -> int:
        return len(self.branch_points) // 2 - 1

    @property
    def span(self) -> float:
        return self.branch_points[-1] - self.branch_points[0]

    @property
    def a(self) -> np.ndarray:
        return np.asarray(self.branch_points, dtype=float)


def new_curve(points) -> HyperellipticCurve:
    """Validate and sort branch points into a curve.

    Requires an even count of at least 4 distinct reals; points closer than
    1e-6 of the span are rejected as duplicates.
    """
    pts = sorted(float(p) for p in points)
    n = len(pts)
    if n < 4:
        raise CurveError(f"need at least 4 branch points, got {n}")
    if n % 2 != 0:
        raise CurveError(f"need an even number of branch points, got {n}")
    span = pts[-1] - pts[0]
    if span <= 0:
        raise CurveError("branch points must not all coincide")
    gaps = np.diff(pts)
    if np.min(gaps) <= _MIN_GAP_FACTOR * span:
        raise CurveError(
            f"branch points too close: min gap {np.min(gaps):.3e} "
            f"vs span {span:.3e}"
        )
    return HyperellipticCurve(tuple(pts))


@dataclass(frozen=True)
class SurfacePoint:
    """A point (x, sheet) of the curve; sheet +1 is the reference branch."""

    x: complex
    sheet: int = 1
    at_infinity: bool = False

    def __post_init__(self):
        if self.sheet not in (1, -1):
            raise CurveError(f"sheet must be +1 or -1, got {self.sheet}")


@dataclass(frozen=True)
class Divisor:
    """Integer-weighted formal sum of surface points."""

    terms: tuple = field(default_factory=tuple)

    @classmethod
    def of(cls, pairs) -> "Divisor":
        return cls(tuple((p, int(w)) for p, w in pairs))

    @property
    def degree(self) -> int:
        return sum(w for _, w in self.terms)


def y_branch(curve: HyperellipticCurve, x) -> complex | np.ndarray:
    """Reference branch of y = sqrt(prod(x - a_i)).

    Computed as exp(0.5 sum Log(x - a_i)) with principal logs, which is
    analytic off the cuts, positive for large real x, and on a cut returns
    the limit from above.
    """
    x = np.asarray(x, dtype=complex)
    logs = np.log(x[..., None] - curve.a)
    return np.exp(0.5 * logs.sum(axis=-1))


def point_y(curve: HyperellipticCurve, p: SurfacePoint) -> complex:
    if p.at_infinity:
        raise CurveError("y is not finite at infinity")
    return p.sheet * complex(y_branch(curve, p.x))


def weierstrass_point(curve: HyperellipticCurve, j: int) -> SurfacePoint:
    """The j-th Weierstrass point (1-based label into the ordered branch points)."""
    if not 1 <= j <= 2 * curve.g + 2:
        raise CurveError(f"branch point label {j} outside [1, {2 * curve.g + 2}]")
    return SurfacePoint(complex(curve.branch_points[j - 1]), 1)


def weierstrass_label(curve: HyperellipticCurve, p: SurfacePoint,
                      tol: float = 1e-9) -> int | None:
    """Label of the branch point p sits on, or None for an ordinary point."""
    if p.at_infinity:
        return None
    if abs(p.x.imag) > tol * curve.span:
        return None
    dist = np.abs(curve.a - p.x.real)
    j = int(np.argmin(dist))
    if dist[j] <= tol * curve.span:
        return j + 1
    return None


def random_point(curve: HyperellipticCurve, seed, region=None) -> SurfacePoint:
    """Seeded generic point: x off the real axis, away from the branch points.

    ``region`` optionally overrides the sampling box as
    ((re_lo, re_hi), (im_lo, im_hi)) for the magnitude of Im x; the sheet
    and the sign of Im x stay random.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    span = curve.span
    a0, a1 = curve.branch_points[0], curve.branch_points[-1]
    if region is None:
        re_lo, re_hi = a0 - 0.25 * span, a1 + 0.25 * span
        im_lo, im_hi = 0.05 * span, 0.6 * span
    else:
        (re_lo, re_hi), (im_lo, im_hi) = region
    for _ in range(100):
        re = rng.uniform(re_lo, re_hi)
        im = rng.uniform(im_lo, im_hi) * (1 if rng.integers(2) else -1)
        sheet = 1 if rng.integers(2) else -1
        x = complex(re, im)
        if np.min(np.abs(curve.a - x)) >= 1e-3 * span:
            return SurfacePoint(x, sheet)
    raise CurveError("could not sample a point away from the branch points")


def generate_branch_points(rng: np.random.Generator, g: int) -> list:
    """Random well-conditioned branch points in [-2, 2] (seeded, sorted)."""
    gaps = rng.uniform(0.25, 1.0, size=2 * g + 1)
    pts = np.concatenate([[0.0], np.cumsum(gaps)])
    pts = -2.0 + 4.0 * pts / pts[-1]
    return [float(p) for p in pts]


# -- curve file format --------------------------------------------------------


def curve_to_json_dict(curve: HyperellipticCurve) -> dict:
    return {
        "schema": 1,
        "genus": curve.g,
        "branch_points": [format(p, ".17g") for p in curve.branch_points],
    }


def canonical_curve_bytes(curve: HyperellipticCurve) -> bytes:
    return json.dumps(
        curve_to_json_dict(curve), sort_keys=True, separators=(",", ":")
    ).encode("ascii")


def curve_hash(curve: HyperellipticCurve) -> str:
    return hashlib.sha256(canonical_curve_bytes(curve)).hexdigest()


def write_curve_file(curve: HyperellipticCurve, path) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_curve_bytes(curve))


def read_curve_file(path) -> HyperellipticCurve:
    with open(path, "r", encoding="ascii") as fh:
        data = json.load(fh)
    if data.get("schema") != 1:
        raise CurveError(f"unsupported curve file schema {data.get('schema')!r}")
    curve = new_curve([float(p) for p in data["branch_points"]])
    if curve.g != data.get("genus"):
        raise CurveError(
            f"genus field {data.get('genus')} disagrees with "
            f"{len(curve.branch_points)} branch points"
        )
    return curve
