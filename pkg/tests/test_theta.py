import numpy as np
import pytest
from scipy.special import erfc

from oracles import brute_theta, brute_theta_grad, fd_gradient

from thetaforge import (
    Characteristic,
    DimensionMismatchError,
    InvalidPeriodMatrixError,
    InvalidToleranceError,
    PeriodMatrix,
    lattice_reduce,
    theta,
    theta_grad,
    theta_hess,
    theta_log,
    truncation_radius,
)

PM1 = PeriodMatrix([[1j]])
TAU2 = np.array([[1.0j, 0.3], [0.3, 1.2j]])
PM2 = PeriodMatrix(TAU2)
TAU3 = np.array([
    [1.1j, 0.2 + 0.1j, -0.15],
    [0.2 + 0.1j, 1.4j, 0.25 + 0.05j],
    [-0.15, 0.25 + 0.05j, 0.9j],
])
PM3 = PeriodMatrix(TAU3)


def zero(g):
    return Characteristic.zero(g)


class TestPeriodMatrix:
    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidPeriodMatrixError):
            PeriodMatrix([[1j, 0.5], [0.1, 1j]])

    def test_rejects_indefinite(self):
        with pytest.raises(InvalidPeriodMatrixError):
            PeriodMatrix([[-1j]])

    def test_scalar_promoted(self):
        assert PeriodMatrix(0.2 + 1.3j).g == 1


class TestTruncationRadius:
    def test_frozen_radius_g1(self):
        # smallest radius whose certified tail bound reaches 1e-12 at
        # genus 1, Y = [1]; found by bisection on the bound
        r = truncation_radius(PM1, [0.0], 1e-12, 0)
        assert r == pytest.approx(3.070090651886807, abs=1e-9)

    def test_closed_form_bound_g1(self):
        # at genus 1, order 0, y = 0 the bound is
        # (1+2R) exp(-pi R^2) + erfc(sqrt(pi) R)
        r = truncation_radius(PM1, [0.0], 1e-12, 0)
        bound = lambda t: (1 + 2 * t) * np.exp(-np.pi * t * t) + erfc(np.sqrt(np.pi) * t)  # noqa: E731
        assert bound(r) <= 1e-12 * (1 + 1e-9)
        assert bound(0.99 * r) > 1e-12

    def test_monotone_in_eps(self):
        r_tight = truncation_radius(PM1, [0.0], 1e-12, 0)
        r_loose = truncation_radius(PM1, [0.0], 1e-6, 0)
        assert r_loose <= r_tight

    def test_scaling_y_shrinks_radius(self):
        r1 = truncation_radius(PM1, [0.0], 1e-12, 0)
        r4 = truncation_radius(PeriodMatrix([[4j]]), [0.0], 1e-12, 0)
        assert r4 < r1

    def test_invalid_tolerance(self):
        with pytest.raises(InvalidToleranceError):
            truncation_radius(PM1, [0.0], 0.0, 0)
        with pytest.raises(InvalidToleranceError):
            truncation_radius(PM1, [0.0], 1e-14, 0)


class TestThetaValues:
    def test_frozen_value_g1(self):
        val = theta(PM1, zero(1), [0.0], 1e-12)
        assert val.value.real == pytest.approx(1.0864348112, abs=1e-10)
        assert abs(val.value.imag) < 1e-12
        assert val.error_bound <= 1e-12

    def test_matches_brute_force_g1(self):
        z = np.array([0.21 - 0.13j])
        alpha = Characteristic.from_halves([0.5], [1.5])
        got = theta(PM1, alpha, z, 1e-12).value
        want = brute_theta([[1j]], alpha, z)
        assert abs(got - want) < 1e-11

    def test_matches_brute_force_g2(self):
        z = np.array([0.1 + 0.2j, -0.3 + 0.05j])
        alpha = Characteristic.from_halves([0.5, 1.0], [-0.5, 0.5])
        got = theta(PM2, alpha, z, 1e-12).value
        want = brute_theta(TAU2, alpha, z, box=12)
        assert abs(got - want) < 1e-10

    def test_odd_characteristic_vanishes_at_zero(self):
        for pm, g in ((PM1, 1), (PM2, 2)):
            alpha = Characteristic.from_halves([0.5] * g, [0.5] + [0.0] * (g - 1))
            if (4 * (alpha.top @ alpha.bottom)) % 2 == 0:
                alpha = Characteristic.from_halves([0.5] * g, [0.5] * g)
            val = theta(pm, alpha, np.zeros(g), 1e-12)
            assert abs(val.value) < 1e-12

    def test_integer_periodicity(self):
        a = theta(PM1, zero(1), [0.3], 1e-12).value
        b = theta(PM1, zero(1), [1.3], 1e-12).value
        assert abs(a - b) < 1e-12

    def test_parity_symmetry(self):
        rng = np.random.default_rng(5)
        for pm, g in ((PM2, 2), (PM3, 3)):
            for _ in range(5):
                top = rng.integers(0, 2, g) / 2.0
                bot = rng.integers(0, 2, g) / 2.0
                alpha = Characteristic.from_halves(top, bot)
                z = rng.normal(size=g) * 0.4 + 1j * rng.normal(size=g) * 0.2
                sign = (-1.0) ** int(round(4 * top @ bot))
                a = theta(pm, alpha, -z, 1e-12).value
                b = sign * theta(pm, alpha, z, 1e-12).value
                assert abs(a - b) <= 1e-9 * max(1.0, abs(b))

    def test_truncation_certificate_double_radius(self):
        # recomputing with twice the certified radius moves the value by < eps
        from thetaforge.theta import _ellipsoid_points

        eps = 1e-10
        z = np.array([0.3 + 0.4j, -0.1 + 0.1j])
        y = z.imag
        c = PM2.y_inv @ y
        r = truncation_radius(PM2, y, eps, 0)
        vals = []
        for radius in (r, 2 * r):
            pts = _ellipsoid_points(PM2, c, radius)
            quad = np.einsum("ij,jk,ik->i", pts + 0.0, PM2.tau, pts + 0.0)
            lin = (pts + 0.0) @ z
            vals.append(np.exp(1j * np.pi * quad + 2j * np.pi * lin).sum())
        assert abs(vals[0] - vals[1]) <= eps

    def test_error_bound_below_requested(self):
        val = theta(PM3, zero(3), np.array([0.2, 0.1j, -0.3 + 0.2j]), 1e-10)
        assert val.error_bound <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            theta(PM2, zero(2), [0.1], 1e-10)
        with pytest.raises(DimensionMismatchError):
            theta(PM2, zero(1), [0.1, 0.2], 1e-10)


class TestDerivatives:
    def test_even_gradient_vanishes_at_zero(self):
        alpha = Characteristic.from_halves([0.5, 0.0], [0.0, 0.0])
        grad = theta_grad(PM2, alpha, np.zeros(2), 1e-12)
        assert all(abs(t.value) < 1e-12 for t in grad)

    def test_gradient_matches_brute_force(self):
        alpha = Characteristic.from_halves([0.5], [0.5])
        got = theta_grad(PM1, alpha, [0.0], 1e-12)[0].value
        want = brute_theta_grad([[1j]], alpha, [0.0])[0]
        assert abs(got - want) < 1e-11
        assert got.real == pytest.approx(-2.848694603987787, abs=1e-10)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(11)
        alpha = Characteristic.from_halves([0.5, 0.0], [0.0, 0.5])
        z = rng.normal(size=2) * 0.3 + 1j * rng.normal(size=2) * 0.2

        def f(w):
            return theta(PM2, alpha, w, 1e-13).value

        grad = np.array([t.value for t in theta_grad(PM2, alpha, z, 1e-13)])
        fd = fd_gradient(f, z, h=1e-5)
        assert np.max(np.abs(grad - fd)) <= 1e-6 * max(1.0, np.max(np.abs(grad)))

    def test_hessian_symmetric_exactly(self):
        z = np.array([0.12 + 0.2j, -0.07 + 0.1j, 0.2 - 0.05j])
        hess = theta_hess(PM3, zero(3), z, 1e-12)
        for j in range(3):
            for k in range(3):
                assert hess[j][k].value == hess[k][j].value

    def test_hessian_of_odd_char_vanishes_at_zero(self):
        alpha = Characteristic.from_halves([0.5, 0.5], [0.5, 0.0])
        assert (4 * alpha.top @ alpha.bottom) % 2 == 1
        hess = theta_hess(PM2, alpha, np.zeros(2), 1e-12)
        assert max(abs(hess[j][k].value) for j in range(2) for k in range(2)) < 1e-11

    def test_hessian_matches_fd_of_gradient(self):
        rng = np.random.default_rng(13)
        z = rng.normal(size=2) * 0.3 + 1j * rng.normal(size=2) * 0.2
        hess = np.array([[t.value for t in row]
                         for row in theta_hess(PM2, zero(2), z, 1e-13)])
        h = 1e-5
        for k in range(2):
            e = np.zeros(2, dtype=complex)
            e[k] = h
            gp = np.array([t.value for t in theta_grad(PM2, zero(2), z + e, 1e-13)])
            gm = np.array([t.value for t in theta_grad(PM2, zero(2), z - e, 1e-13)])
            fd = (gp - gm) / (2 * h)
            assert np.max(np.abs(hess[:, k] - fd)) <= 1e-5 * max(1.0, np.max(np.abs(hess)))


class TestQuasiPeriodicity:
    def test_magnitude_factor(self):
        rng = np.random.default_rng(3)
        for pm in (PM2, PM3):
            g = pm.g
            z = rng.normal(size=g) * 0.3 + 1j * rng.normal(size=g) * 0.2
            for _ in range(4):
                m = rng.integers(-2, 3, g)
                n = rng.integers(-2, 3, g)
                shifted = z + pm.tau @ m + n
                big = np.exp(np.pi * m @ pm.y @ m + 2 * np.pi * m @ z.imag)
                eps = max(1e-13, 1e-13 * float(big))
                a = abs(theta(pm, zero(g), shifted, eps).value)
                b = float(big) * abs(theta(pm, zero(g), z, 1e-13).value)
                assert abs(a - b) <= 1e-8 * max(a, b)

    def test_lattice_reduce_round_trip(self):
        z = np.array([0.2 + 0.9j, -1.4 + 2.2j])
        z0, m, n = lattice_reduce(PM2, z)
        assert np.allclose(z0 + PM2.tau @ m + n, z, atol=1e-12)
        assert np.max(np.abs(PM2.y_inv @ z0.imag)) <= 0.5 + 1e-9
        z0b, mb, nb = lattice_reduce(PM2, z0)
        assert np.all(mb == 0) and np.all(nb == 0)
        assert np.allclose(z0b, z0, atol=1e-15)

    def test_theta_log_consistency(self):
        z = np.array([0.4 + 1.7j, -0.8 + 0.9j])
        logv, red_abs, err = theta_log(PM2, zero(2), z, 1e-12)
        direct = theta(PM2, zero(2), z, 1e-6).value
        assert abs(np.exp(logv) - direct) <= 1e-6 * abs(direct)
        assert red_abs > 0
