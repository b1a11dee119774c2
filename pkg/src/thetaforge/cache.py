"""Persistent period cache keyed by the SHA-256 of the canonical curve file.

Cache files are JSON with every number as a decimal string of 17
significant digits, so reconstructed values are bit-identical to what was
stored.  Writes are atomic (write to a temporary file, then rename).
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .curves import HyperellipticCurve, curve_hash
from .jacobian import ensure_calibrated
from .periods import PeriodData, periods
from .theta import PeriodMatrix

ENV_CACHE_DIR = "THETAFORGE_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "thetaforge"


def _mat_to_strings(mat: np.ndarray) -> tuple[list, list]:
    flat = np.asarray(mat, dtype=complex).ravel()
    re = [format(v.real, ".17e") for v in flat]
    im = [format(v.imag, ".17e") for v in flat]
    return re, im


def _mat_from_strings(re, im, shape) -> np.ndarray:
    flat = np.array([float(r) for r in re]) + 1j * np.array([float(i) for i in im])
    return flat.reshape(shape)


def cache_path(cache_dir, curve: HyperellipticCurve) -> Path:
    return Path(cache_dir) / f"{curve_hash(curve)}.json"


def save_period_cache(cache_dir, curve: HyperellipticCurve, pd: PeriodData) -> Path:
    if pd.delta is None:
        raise ValueError("calibrate the period data before caching")
    path = cache_path(cache_dir, curve)
    path.parent.mkdir(parents=True, exist_ok=True)
    tau_re, tau_im = _mat_to_strings(pd.tau.tau)
    a_re, a_im = _mat_to_strings(pd.A_periods)
    d_re, d_im = _mat_to_strings(pd.delta)
    payload = {
        "schema": 1,
        "curve_hash": curve_hash(curve),
        "eps": format(pd.eps, ".17e"),
        "tau_re": tau_re,
        "tau_im": tau_im,
        "A_re": a_re,
        "A_im": a_im,
        "delta_re": d_re,
        "delta_im": d_im,
    }
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    with open(tmp, "w", encoding="ascii") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)
    return path


def load_period_cache(cache_dir, curve: HyperellipticCurve,
                      eps: float) -> PeriodData | None:
    """Reconstruct cached period data when it is at least as precise as eps."""
    path = cache_path(cache_dir, curve)
    if not path.exists():
        return None
    try:
        with open(path, "r", encoding="ascii") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if data.get("schema") != 1 or data.get("curve_hash") != curve_hash(curve):
        return None
    cached_eps = float(data["eps"])
    if cached_eps > eps * (1.0 + 1e-12):
        return None
    g = curve.g
    tau = _mat_from_strings(data["tau_re"], data["tau_im"], (g, g))
    a_mat = _mat_from_strings(data["A_re"], data["A_im"], (g, g))
    delta = _mat_from_strings(data["delta_re"], data["delta_im"], (g,))
    basis_change = np.linalg.inv(a_mat.T)
    b_mat = (a_mat.T @ tau).T
    pd = PeriodData(a_mat, b_mat, PeriodMatrix(tau), basis_change, cached_eps)
    pd.delta = delta
    return pd


def load_or_compute(curve: HyperellipticCurve, eps: float = 1e-12,
                    cache_dir=None, use_cache: bool = True) -> PeriodData:
    """Cached period data for ``curve``, calibrated and ready for divisors."""
    directory = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    if use_cache:
        pd = load_period_cache(directory, curve, eps)
        if pd is not None:
            return pd
    pd = periods(curve, eps)
    ensure_calibrated(curve, pd)
    if use_cache:
        save_period_cache(directory, curve, pd)
    return pd
