import numpy as np
import pytest

from oracles import brute_theta_grad

from thetaforge import (
    Characteristic,
    DimensionMismatchError,
    PeriodMatrix,
    eta_det,
    jacobian_nullwerte,
    jacobian_points,
    theta_grad,
    theta_hess,
)
from thetaforge.determinants import det_compensated

PM1 = PeriodMatrix([[1j]])
TAU2 = np.array([[1.0j, 0.3], [0.3, 1.2j]])
PM2 = PeriodMatrix(TAU2)


def grad_vec(pm, alpha, z, eps=1e-12):
    return np.array([t.value for t in theta_grad(pm, alpha, z, eps)])


class TestJacobianPoints:
    def test_genus1_is_first_derivative(self):
        w = np.array([0.3 + 0.1j])
        got = jacobian_points(PM1, [w], 1e-12)
        want = grad_vec(PM1, Characteristic.zero(1), w)[0]
        assert got == want

    def test_swap_negates_exactly(self):
        w1 = np.array([0.2 + 0.1j, -0.1 + 0.3j])
        w2 = np.array([-0.4 + 0.2j, 0.3 - 0.1j])
        a = jacobian_points(PM2, [w1, w2], 1e-12)
        b = jacobian_points(PM2, [w2, w1], 1e-12)
        assert a == -b

    def test_cofactor_oracle_g2(self):
        rng = np.random.default_rng(2)
        ws = [rng.normal(size=2) * 0.3 + 1j * rng.normal(size=2) * 0.2
              for _ in range(2)]
        cols = [grad_vec(PM2, Characteristic.zero(2), w) for w in ws]
        want = cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0]
        got = jacobian_points(PM2, ws, 1e-12)
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want))

    def test_wrong_count_rejected(self):
        with pytest.raises(DimensionMismatchError):
            jacobian_points(PM2, [np.zeros(2)], 1e-10)


class TestJacobianNullwerte:
    def test_genus1_equals_gradient(self):
        alpha = Characteristic.from_halves([0.5], [0.5])
        got = jacobian_nullwerte(PM1, [alpha], 1e-12)
        want = brute_theta_grad([[1j]], alpha, [0.0])[0]
        assert abs(got - want) < 1e-11

    def test_even_column_gives_zero(self):
        even = Characteristic.from_halves([0.5], [0.0])
        assert abs(jacobian_nullwerte(PM1, [even], 1e-12)) < 1e-11

    def test_repeated_characteristic_gives_zero(self):
        odd = Characteristic.from_halves([0.5, 0.5], [0.5, 0.0])
        scale = abs(jacobian_nullwerte(
            PM2, [odd, Characteristic.from_halves([0.5, 0.0], [0.5, 0.5])], 1e-12))
        assert abs(jacobian_nullwerte(PM2, [odd, odd], 1e-12)) <= 1e-12 * max(1.0, scale)

    def test_representative_affects_sign(self):
        odd = Characteristic.from_halves([0.5], [0.5])
        shifted = Characteristic.from_halves([0.5], [1.5])
        a = jacobian_nullwerte(PM1, [odd], 1e-12)
        b = jacobian_nullwerte(PM1, [shifted], 1e-12)
        assert abs(a + b) < 1e-11


class TestEtaDet:
    def test_genus1_bordered_form(self):
        z = np.array([0.27 + 0.12j])
        got = eta_det(PM1, z, 1e-12)
        th1 = grad_vec(PM1, Characteristic.zero(1), z)[0]
        assert abs(got + th1 * th1) <= 1e-12 * max(1.0, abs(got))

    def test_even_in_z(self):
        rng = np.random.default_rng(4)
        z = rng.normal(size=2) * 0.4 + 1j * rng.normal(size=2) * 0.2
        a = eta_det(PM2, z, 1e-12)
        b = eta_det(PM2, -z, 1e-12)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))

    def test_cofactor_oracle_g2(self):
        rng = np.random.default_rng(6)
        z = rng.normal(size=2) * 0.3 + 1j * rng.normal(size=2) * 0.2
        grad = grad_vec(PM2, Characteristic.zero(2), z)
        hess = np.array([[t.value for t in row]
                         for row in theta_hess(PM2, Characteristic.zero(2), z, 1e-12)])
        mat = np.zeros((3, 3), dtype=complex)
        mat[:2, :2] = hess
        mat[:2, 2] = grad
        mat[2, :2] = grad
        # direct cofactor expansion along the last row
        want = (mat[2, 0] * (mat[0, 1] * mat[1, 2] - mat[0, 2] * mat[1, 1])
                - mat[2, 1] * (mat[0, 0] * mat[1, 2] - mat[0, 2] * mat[1, 0]))
        got = eta_det(PM2, z, 1e-12)
        assert abs(got - want) <= 1e-12 * max(1.0, abs(got))


class TestDetCompensated:
    def test_matches_numpy_on_random(self):
        rng = np.random.default_rng(8)
        for n in (2, 3, 4, 5):
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            assert det_compensated(m) == pytest.approx(np.linalg.det(m), rel=1e-12)

    def test_column_permutation_sign_exact(self):
        rng = np.random.default_rng(9)
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        swapped = m[:, [1, 0, 2, 3]]
        assert det_compensated(swapped) == -det_compensated(m)
        cycled = m[:, [1, 2, 0, 3]]
        assert det_compensated(cycled) == det_compensated(m)
