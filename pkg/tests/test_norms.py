import numpy as np
import pytest

from thetaforge import (
    Characteristic,
    Divisor,
    PeriodMatrix,
    divisor_class,
    eta_det,
    jacobian_points,
    norm_J,
    norm_eta,
    norm_theta,
    random_point,
    theta,
    theta_grad,
)

PM1 = PeriodMatrix([[1j]])
TAU2 = np.array([[1.0j, 0.3], [0.3, 1.2j]])
PM2 = PeriodMatrix(TAU2)


def test_norm_theta_real_argument():
    z = np.array([0.37])
    want = 1.0 * abs(theta(PM1, Characteristic.zero(1), z, 1e-12).value)
    assert norm_theta(PM1, z, 1e-12) == pytest.approx(want, rel=1e-14)


def test_norm_theta_vanishes_at_odd_half_period():
    alpha = Characteristic.from_halves([0.5], [0.5])
    z = PM1.tau @ alpha.top + alpha.bottom
    assert norm_theta(PM1, z, 1e-12) < 1e-10


def test_norm_theta_lattice_invariance():
    rng = np.random.default_rng(21)
    z = rng.normal(size=2) * 0.3 + 1j * rng.normal(size=2) * 0.2
    base = norm_theta(PM2, z, 1e-13)
    for m1 in (-1, 0, 1):
        for m2 in (-1, 0, 1):
            m = np.array([m1, m2])
            n = np.array([m2, -m1])
            val = norm_theta(PM2, z + PM2.tau @ m + n, 1e-13)
            assert val == pytest.approx(base, rel=1e-9, abs=1e-12)


def test_norm_J_real_arguments_genus1():
    w = np.array([0.41])
    th1 = theta_grad(PM1, Characteristic.zero(1), w, 1e-12)[0].value
    assert norm_J(PM1, [w], 1e-12) == pytest.approx(abs(th1), rel=1e-13)


def test_norm_J_permutation_invariant():
    rng = np.random.default_rng(22)
    ws = [rng.normal(size=2) * 0.3 + 1j * rng.normal(size=2) * 0.2
          for _ in range(2)]
    a = norm_J(PM2, ws, 1e-12)
    b = norm_J(PM2, list(reversed(ws)), 1e-12)
    assert a == b


def test_norm_eta_real_argument():
    z = np.array([0.29])
    want = abs(eta_det(PM1, z, 1e-12))
    assert norm_eta(PM1, z, 1e-12) == pytest.approx(want, rel=1e-13)


def test_norm_eta_even_half_period_genus1():
    # an even half period with a tau component; eta = -theta_1^2 at genus 1
    alpha = Characteristic.from_halves([0.5], [0.0])
    z = PM1.tau @ alpha.top + alpha.bottom
    th1 = theta_grad(PM1, Characteristic.zero(1), z, 1e-13)[0].value
    y = z.imag
    want = (PM1.det_y ** 1.5
            * np.exp(-2 * np.pi * float(y @ PM1.y_inv @ y))
            * abs(th1) ** 2)
    assert norm_eta(PM1, z, 1e-12) == pytest.approx(want, rel=1e-10)


def test_norm_J_and_eta_invariant_on_theta_divisor(curve_data):
    # arguments on the zero set of theta: images of effective divisors
    curve, pd = curve_data[2]
    pm = pd.tau
    rng = np.random.default_rng(23)
    ws = []
    for _ in range(2):
        p = random_point(curve, rng)
        ws.append(divisor_class(curve, pd, Divisor.of([(p, 1)]), 1e-11))
    base_j = norm_J(pm, ws, 1e-13)
    base_eta = norm_eta(pm, ws[0], 1e-13)
    for m, n in (((1, 0), (0, 1)), ((-1, 1), (1, 1)), ((0, -1), (-1, 0))):
        shift = pm.tau @ np.array(m) + np.array(n)
        val_j = norm_J(pm, [ws[0] + shift, ws[1]], 1e-13)
        val_eta = norm_eta(pm, ws[0] + shift, 1e-13)
        assert val_j == pytest.approx(base_j, rel=1e-8, abs=1e-12)
        assert val_eta == pytest.approx(base_eta, rel=1e-8, abs=1e-12)
