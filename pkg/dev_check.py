"""Development sanity checks (not part of the package)."""
import numpy as np

from thetaforge import (
    Characteristic, PeriodMatrix, theta, theta_grad, new_curve, periods,
    calibrate, half_period, weierstrass_class, lattice_distance,
    verify_jacobi, verify_thm2,
)
from thetaforge.jacobian import ensure_w_images


def brute_theta(tau, alpha, z, box=30):
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    g = tau.shape[0]
    a1 = np.asarray(alpha.top2, float) / 2
    a2 = np.asarray(alpha.bottom2, float) / 2
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    grids = np.meshgrid(*[np.arange(-box, box + 1)] * g, indexing="ij")
    ns = np.stack([gr.ravel() for gr in grids], axis=-1).astype(float)
    p = ns + a1
    quad = np.einsum("ij,jk,ik->i", p, tau, p)
    lin = p @ (z + a2)
    return np.exp(1j * np.pi * quad + 2j * np.pi * lin).sum()


# 1. theta oracle
pm = PeriodMatrix([[1j]])
val = theta(pm, Characteristic.zero(1), [0.0], 1e-12).value
print("theta(0;i) =", val, "brute:", brute_theta([[1j]], Characteristic.zero(1), [0.0]))

alpha = Characteristic.from_halves([0.5], [1.5])
z = np.array([0.23 + 0.11j])
print("reduce sign check:",
      theta(pm, alpha, z, 1e-12).value,
      brute_theta([[1j]], alpha, z))

g2tau = np.array([[1.0j, 0.3], [0.3, 1.2j]])
pm2 = PeriodMatrix(g2tau)
z2 = np.array([0.1 + 0.2j, -0.3 + 0.05j])
al2 = Characteristic.from_halves([0.5, 1.0], [-0.5, 0.5])
print("g2:", theta(pm2, al2, z2, 1e-12).value, brute_theta(g2tau, al2, z2, box=12))

# 2. Jacobi identity on raw tau
rep = verify_jacobi(PeriodMatrix([[0.3 + 1.7j]]), 1e-10)
print("jacobi residual:", rep.rel_residual, "sign:", rep.sign)

# 3. AGM for g=1 periods
def agm(a, b):
    for _ in range(200):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        if abs(a - b) < 1e-16 * abs(a):
            break
    return 0.5 * (a + b)

curve = new_curve([-3.0, -1.0, 1.0, 3.0])
pd = periods(curve, 1e-12)
print("tau g1:", pd.tau.tau)
a1_, a2_, a3_, a4_ = curve.branch_points
k2 = ((a2_ - a1_) * (a4_ - a3_)) / ((a3_ - a1_) * (a4_ - a2_))
k = np.sqrt(k2); kp = np.sqrt(1 - k2)
print("AGM candidates: i*AGM(1,kp)/AGM(1,k) =", 1j * agm(1, kp) / agm(1, k),
      "  i*AGM(1,k)/AGM(1,kp) =", 1j * agm(1, k) / agm(1, kp))

curve_b = new_curve([-2.0, -0.7, 0.4, 1.9])
pd_b = periods(curve_b, 1e-12)
b1, b2, b3, b4 = curve_b.branch_points
k2b = ((b2 - b1) * (b4 - b3)) / ((b3 - b1) * (b4 - b2))
kb = np.sqrt(k2b); kpb = np.sqrt(1 - k2b)
print("tau g1 asym:", pd_b.tau.tau[0, 0],
      " candA:", 1j * agm(1, kpb) / agm(1, kb),
      " candB:", 1j * agm(1, kb) / agm(1, kpb))

# 4. g=2 calibration: does the Weierstrass table hold?
curve2 = new_curve([-1.8, -1.0, -0.2, 0.5, 1.1, 1.9])
pd2 = periods(curve2, 1e-12)
print("tau g2:\n", pd2.tau.tau)
print("symmetry residual:", np.max(np.abs(pd2.tau.tau - pd2.tau.tau.T)))
print("Im eigvals:", np.linalg.eigvalsh(pd2.tau.tau.imag))
try:
    calibrate(curve2, pd2)
    print("calibration OK, delta =", pd2.delta)
except Exception as exc:
    print("calibration FAILED:", exc)
    w = ensure_w_images(curve2, pd2)
    for t in [(1,), (2,), (3,), (4,), (5,), (6,)]:
        target = half_period(pd2.tau, weierstrass_class(2, t))
        # delta from T0 = {1}
        t0 = (1,)
        d0 = half_period(pd2.tau, weierstrass_class(2, t0)) - w[0]
        phi = w[t[0] - 1] + d0
        print(t, "resid:", lattice_distance(pd2.tau, phi - target))

# 5. thm2 at g=2 from the curve
try:
    rep2 = verify_thm2(pd2, tuple(range(1, 7)), 1e-9, curve=curve2)
    print("thm2 g2 residual:", rep2.rel_residual, "sign:", rep2.sign)
except Exception as exc:
    print("thm2 g2 FAILED:", exc)
