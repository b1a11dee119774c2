import numpy as np
import pytest

from oracles import agm_tau_g1

from thetaforge import CurveError, new_curve, periods
from thetaforge.curves import generate_branch_points
from thetaforge.periods import segment_integrals


class TestNewCurve:
    def test_sorts_input(self):
        curve = new_curve([1.0, -1.0, 3.0, -3.0])
        assert curve.branch_points == (-3.0, -1.0, 1.0, 3.0)
        assert curve.g == 1

    def test_rejects_duplicates(self):
        with pytest.raises(CurveError):
            new_curve([0.0, 0.0, 1.0, 2.0])

    def test_rejects_odd_count(self):
        with pytest.raises(CurveError):
            new_curve([0.0, 1.0, 2.0, 3.0, 4.0])

    def test_rejects_too_few(self):
        with pytest.raises(CurveError):
            new_curve([0.0, 1.0])

    def test_genus2_from_six_points(self):
        assert new_curve([-2, -1, 0, 1, 2, 3]).g == 2


class TestTauGenus1:
    def test_symmetric_quartet_purely_imaginary(self):
        pd = periods(new_curve([-3.0, -1.0, 1.0, 3.0]), 1e-12)
        tau = pd.tau.tau[0, 0]
        assert abs(tau.real) < 1e-9
        assert tau.imag > 0

    def test_agm_oracle_fixed_curve(self):
        pts = [-3.0, -1.0, 1.0, 3.0]
        pd = periods(new_curve(pts), 1e-12)
        assert abs(pd.tau.tau[0, 0] - agm_tau_g1(pts)) < 1e-10

    def test_agm_oracle_random_curves(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            pts = generate_branch_points(rng, 1)
            pd = periods(new_curve(pts), 1e-12)
            assert abs(pd.tau.tau[0, 0] - agm_tau_g1(pts)) < 1e-10


class TestTauValidity:
    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_symmetry_and_positivity(self, g):
        rng = np.random.default_rng(40 + g)
        for _ in range(3):
            curve = new_curve(generate_branch_points(rng, g))
            tau = periods(curve, 1e-12).tau.tau
            assert np.max(np.abs(tau - tau.T)) <= 1e-9
            assert np.linalg.eigvalsh(tau.imag)[0] > 0

    def test_affine_invariance(self):
        rng = np.random.default_rng(51)
        for g in (1, 2):
            pts = generate_branch_points(rng, g)
            tau_a = periods(new_curve(pts), 1e-12).tau.tau
            mapped = [2.0 * p + 1.0 for p in pts]
            tau_b = periods(new_curve(mapped), 1e-12).tau.tau
            assert np.max(np.abs(tau_a - tau_b)) <= 1e-9

    def test_normalization_invariant(self):
        curve = new_curve([-1.8, -1.0, -0.2, 0.5, 1.1, 1.9])
        pd = periods(curve, 1e-12)
        ident = pd.A_periods @ pd.basis_change.T
        assert np.max(np.abs(ident - np.eye(2))) <= 1e-9


class TestQuadrature:
    def test_node_doubling_stability(self):
        curve = new_curve([-1.8, -1.0, -0.2, 0.5, 1.1, 1.9])
        eps = 1e-11
        base = periods(curve, eps)
        finer = periods(curve, eps / 4.0)
        for name in ("A_periods", "B_periods"):
            a = getattr(base, name)
            b = getattr(finer, name)
            assert np.max(np.abs(a - b)) <= eps

    def test_segment_integral_positive(self):
        curve = new_curve([-3.0, -1.0, 1.0, 3.0])
        vals = segment_integrals(curve, 1, 1e-13)
        assert vals[0] > 0
