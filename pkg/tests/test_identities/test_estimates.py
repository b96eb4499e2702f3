"""Tests for the a priori and coercive inequalities."""

import numpy as np
import pytest

from contactinstanton import config, cylfield, identities, instanton, reeb
from contactinstanton import triad as tr


def grid_of(Nt):
    return cylfield.CylinderGrid(L=1.0, Ntau=Nt + 1, Nt=Nt)


def decaying_circle(tau, t):
    return 0.3 * np.exp(-2 * np.pi * (tau + 1j * t))


@pytest.fixture(scope="module")
def golden_orbit():
    return reeb.coordinate_orbit(tr.EllipsoidTriad())


@pytest.fixture(scope="module")
def trivial(golden_orbit):
    return instanton.trivial_cylinder(golden_orbit, grid_of(16))


@pytest.fixture(scope="module")
def oracles():
    return [instanton.oracle_flat(grid_of(Nt), decaying_circle) for Nt in (16, 32)]


class TestTensorBounds:
    def test_flat_model(self, oracles):
        bounds = identities.tensor_bounds(oracles[0])
        assert bounds.lie < 1e-6
        assert bounds.nabla_lie < 1e-6
        assert bounds.ricci < 1e-6
        assert bounds.apriori_constant == pytest.approx(1.0, abs=1e-5)
        assert bounds.coercive_constant == pytest.approx(4.0, abs=1e-5)

    def test_safety_factor(self):
        triad = tr.PerturbedEllipsoidTriad(seed=5)
        w = instanton.trivial_cylinder(reeb.coordinate_orbit(triad), grid_of(16))
        bounds = identities.tensor_bounds(w)
        with config.analysis_context(norm_safety=2.2):
            doubled = identities.tensor_bounds(w)
        assert bounds.lie > 0.0
        assert doubled.lie == pytest.approx(2.0 * bounds.lie)
        assert doubled.nabla_lie == pytest.approx(2.0 * bounds.nabla_lie)


class TestPointwise:
    def test_apriori_oracle(self, oracles):
        report = identities.apriori_density_check(oracles)
        assert report.passed
        assert report.expected_order is None
        assert all(value > 0 for value in report.slack)

    def test_apriori_trivial(self, trivial):
        assert identities.apriori_density_check(trivial).passed

    def test_coercive_oracle(self, oracles):
        report = identities.pointwise_coercive_check(oracles)
        assert report.passed
        assert max(report.residuals) < 0.5

    def test_nabla_dw_of_trivial_cylinder(self, trivial):
        assert np.max(identities.nabla_dw_squared(trivial)) < 1e-6


class TestCoerciveEstimate:
    def test_cutoff(self):
        tau = np.linspace(0.0, 1.0, 101)
        chi, dchi = identities.raised_cosine_cutoff(tau, (0.4, 0.6), (0.2, 0.9))
        np.testing.assert_allclose(chi[40:61], 1.0)
        assert chi[20] == pytest.approx(0.0, abs=1e-12)
        assert chi[90] == pytest.approx(0.0, abs=1e-12)
        assert np.all((chi >= 0.0) & (chi <= 1.0))
        assert dchi == pytest.approx(np.pi / 0.4)
        assert np.max(np.abs(np.diff(chi) / np.diff(tau))) <= dchi

    def test_oracle(self, oracles):
        report = identities.coercive_estimate_check(oracles, (0.3, 0.7), (0.1, 0.9))
        assert report.passed
        assert all(0.0 < ratio < 1.0 for ratio in report.residuals)

    def test_trivial_cylinder(self, trivial):
        report = identities.coercive_estimate_check(trivial, (0.3, 0.7), (0.1, 0.9))
        assert report.passed
        assert report.slack[0] > 0.0
        assert report.residuals[0] < 1e-6

    @pytest.mark.parametrize(
        "D1, D2",
        [((0.1, 0.7), (0.1, 0.9)), ((0.3, 0.95), (0.1, 0.9)), ((0.3, 0.7), (-0.1, 0.9)), ((0.7, 0.3), (0.1, 0.9))],
    )
    def test_nesting_violated(self, oracles, D1, D2):
        with pytest.raises(ValueError):
            identities.coercive_estimate_check(oracles, D1, D2)
