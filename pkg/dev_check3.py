"""Investigate the g=3 sign discrepancy in variants i/ii."""
import numpy as np

from thetaforge import new_curve, periods, calibrate, random_point
from thetaforge.jacobian import abel_jacobi
from thetaforge.theta import lattice_reduce
from thetaforge.verifier import _Atoms, theta_scale
import math


def thm1_ratio(curve, pd, us, uq, variant="i"):
    """Return lhs/rhs as a complex number (log domain)."""
    g = curve.g
    atoms = _Atoms(pd.tau, 1e-10, theta_scale(pd.tau, 1e-10))
    delta = pd.delta
    total = sum(us)
    z_d = total - uq + delta
    z_dk = [total - us[k] + delta for k in range(g)]
    sign_neg = math.comb(g + 2, 3) % 2 == 1
    log_sign = 1j * np.pi if sign_neg else 0.0
    l_j = atoms.log_J(z_dk)
    l_thd = atoms.log_theta(z_d)
    if variant == "i":
        l_lhs = sum(atoms.log_eta(z_dk[k]) for k in range(g))
        cross = sum(
            2.0 * atoms.log_theta(z_dk[j] + us[k] - uq)
            - atoms.log_theta(z_dk[j] + us[k] - us[j])
            for j in range(g) for k in range(g) if j != k
        )
    else:
        l_lhs = sum(atoms.log_eta((g - 1) * us[k] + delta) for k in range(g))
        cross = sum(
            2.0 * atoms.log_theta(g * us[j] - uq + delta)
            - atoms.log_theta(g * us[j] - us[k] + delta)
            for j in range(g) for k in range(g) if j != k
        )
    l_rhs = log_sign + 2 * g * (l_j - (g - 1) * l_thd) + cross
    return np.exp(complex(l_lhs - l_rhs))


for gval, pts in [(1, [-1.5, -0.4, 0.8, 1.7]),
                  (2, [-1.8, -1.0, -0.2, 0.5, 1.1, 1.9]),
                  (3, [-2.0, -1.3, -0.6, 0.05, 0.7, 1.3, 1.9, 2.5]),
                  (3, [-1.9, -1.2, -0.5, 0.1, 0.8, 1.25, 1.7, 2.3]),
                  (4, [-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.4])]:
    curve = new_curve(pts)
    pd = periods(curve, 1e-12)
    calibrate(curve, pd)
    g = curve.g
    pm = pd.tau
    rng = np.random.default_rng(101)
    for trial in range(3):
        ps = [random_point(curve, rng) for _ in range(g)]
        q = random_point(curve, rng)
        us = [lattice_reduce(pm, abel_jacobi(curve, pd, p, 1, 1e-11))[0] for p in ps]
        uq = lattice_reduce(pm, abel_jacobi(curve, pd, q, 1, 1e-11))[0]
        r_i = thm1_ratio(curve, pd, us, uq, "i")
        r_ii = thm1_ratio(curve, pd, us, uq, "ii")
        print(f"g={g} trial {trial}: ratio_i={r_i:.6f} ratio_ii={r_ii:.6f}")
        if trial == 0:
            # shift lifts deliberately
            for shift_desc, lam in [("+e1", np.eye(g)[0].astype(complex)),
                                    ("+tau e1", pm.tau @ np.eye(g)[0]),
                                    ("+tau e2", pm.tau @ np.eye(g)[min(1, g-1)])]:
                us2 = [us[0] + lam] + us[1:]
                r = thm1_ratio(curve, pd, us2, uq, "i")
                print(f"    shift u1 {shift_desc}: ratio_i={r:.6f}")
            # shift uq
            r = thm1_ratio(curve, pd, us, uq + pm.tau @ np.eye(g)[0], "i")
            print(f"    shift uq +tau e1: ratio_i={r:.6f}")
            # shift delta by a lattice vector
            old_delta = pd.delta.copy()
            pd.delta = pd.delta + pm.tau @ np.eye(g)[0]
            r = thm1_ratio(curve, pd, us, uq, "i")
            print(f"    shift delta +tau e1: ratio_i={r:.6f}")
            pd.delta = old_delta
