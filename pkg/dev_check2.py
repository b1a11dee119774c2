"""Development checks: Abel-Jacobi to generic points + thm1/cor/normed."""
import time

import numpy as np

from thetaforge import (
    Characteristic, Divisor, new_curve, periods, calibrate, divisor_class,
    abel_jacobi, random_point, theta, norm_theta, lattice_distance,
    verify_thm1, verify_cor_products, verify_normed, SurfacePoint,
)
from thetaforge.verifier import theta_scale, sample_points, verify_with_resampling

rng = np.random.default_rng(42)

for g, pts in [(1, [-1.5, -0.4, 0.8, 1.7]),
               (2, [-1.8, -1.0, -0.2, 0.5, 1.1, 1.9]),
               (3, [-2.0, -1.3, -0.6, 0.05, 0.7, 1.3, 1.9, 2.5])]:
    curve = new_curve(pts)
    t0 = time.time()
    pd = periods(curve, 1e-12)
    calibrate(curve, pd)
    t1 = time.time()
    print(f"g={g}: periods+calibration {t1-t0:.2f}s")

    # Abel-Jacobi sanity: involution and doubling
    p = random_point(curve, rng)
    u = abel_jacobi(curve, pd, p, 1, 1e-11)
    u_inv = abel_jacobi(curve, pd, SurfacePoint(p.x, -p.sheet), 1, 1e-11)
    print("  involution resid:", lattice_distance(pd.tau, u + u_inv))

    # Riemann vanishing: effective degree g-1 divisors
    t0 = time.time()
    vals = []
    for _ in range(5):
        ps = [random_point(curve, rng) for _ in range(g - 1)]
        d = Divisor.of([(x, 1) for x in ps])
        z = divisor_class(curve, pd, d, 1e-11)
        vals.append(norm_theta(pd.tau, z, 1e-12))
    generic = [norm_theta(pd.tau, divisor_class(
        curve, pd, Divisor.of([(random_point(curve, rng), 1) for _ in range(g)] +
                              [(random_point(curve, rng), -1)]), 1e-11), 1e-12)
        for _ in range(5)]
    t1 = time.time()
    print(f"  riemann vanishing: max effective {max(vals):.2e} vs "
          f"max generic {max(generic):.2e}  ({t1-t0:.2f}s)")

    # identities
    scale = theta_scale(pd.tau, 1e-10)
    t0 = time.time()
    for variant in ("i", "ii", "iii"):
        rep = verify_with_resampling(
            lambda points, q, v=variant: verify_thm1(curve, pd, v, points, q,
                                                     1e-10, scale=scale),
            curve, np.random.default_rng(7))
        print(f"  thm1 {variant}: residual {rep.rel_residual:.3e}")
    rep = verify_with_resampling(
        lambda points, q: verify_cor_products(curve, pd, points, q, 1e-10,
                                              scale=scale),
        curve, np.random.default_rng(9))
    print(f"  cor: residual {rep.rel_residual:.3e}")
    for variant in ("i", "ii", "iii"):
        rep = verify_with_resampling(
            lambda points, q, v=variant: verify_normed(curve, pd, v, points, q,
                                                       1e-10, scale=scale),
            curve, np.random.default_rng(11))
        print(f"  normed {variant}: residual {rep.rel_residual:.3e}")
    t1 = time.time()
    print(f"  identity block: {t1-t0:.2f}s")
