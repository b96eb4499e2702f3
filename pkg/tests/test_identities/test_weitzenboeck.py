"""Tests for the Weitzenböck formulas and the Hodge star identities."""

import numpy as np
import pytest

from contactinstanton import cylfield, identities, instanton, reeb
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
    return instanton.trivial_cylinder(golden_orbit, cylfield.CylinderGrid(L=2.0, Ntau=17, Nt=32))


@pytest.fixture(scope="module")
def oracles():
    return [instanton.oracle_flat(grid_of(Nt), decaying_circle) for Nt in (16, 32, 64)]


@pytest.fixture(scope="module")
def perturbed(golden_orbit):
    return [
        instanton.perturb_interior(instanton.trivial_cylinder(golden_orbit, grid_of(Nt)), 0.05)
        for Nt in (16, 32, 64)
    ]


class TestHodgeConventions:
    def test_selftest(self):
        assert identities.hodge_convention_selftest() == 0.0
        assert identities.hodge_convention_selftest(seed=5) == 0.0

    def test_inner_star(self, oracles):
        report = identities.inner_star_residual(oracles, seed=3)
        assert max(report.residuals) < 1e-12
        assert report.passed

    @pytest.mark.parametrize("seed", [0, 1])
    def test_random_form_is_deterministic(self, seed):
        grid = grid_of(16)
        first = identities.random_form(grid, seed)
        second = identities.random_form(grid, seed)
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)

    def test_random_form_refines(self):
        coarse = identities.random_form(grid_of(16), 2)
        fine = identities.random_form(grid_of(32), 2)
        np.testing.assert_allclose(fine[0][::2, ::2], coarse[0], atol=1e-12)


class TestDensity:
    def test_trivial_cylinder(self, trivial):
        # connection data are finite differences of the triad
        assert identities.weitzenboeck_density_residual(trivial).residuals[0] < 1e-6
        assert identities.lambda_weitzenboeck_residual(trivial).residuals[0] < 1e-6

    def test_oracle(self, oracles):
        report = identities.weitzenboeck_density_residual(oracles)
        assert report.passed
        assert report.order >= 1.0

    def test_oracle_converges_at_fine_resolutions(self):
        fields = [instanton.oracle_flat(grid_of(Nt), decaying_circle) for Nt in (32, 64, 128)]
        report = identities.weitzenboeck_density_residual(fields)
        assert report.passed
        assert report.order >= 1.5
        for coarse, fine in zip(report.residuals, report.residuals[1:]):
            assert coarse / fine > 3.0

    def test_lambda_oracle(self, oracles):
        report = identities.lambda_weitzenboeck_residual(oracles)
        assert report.passed
        assert report.order >= 1.0


class TestForms:
    def test_constant_coefficients_on_trivial_cylinder(self, trivial):
        shape = trivial.grid.shape
        beta = (np.full(shape, 1.0 + 2.0j), np.full(shape, -0.5 + 1.0j))
        report = identities.weitzenboeck_forms_residual(trivial, beta=beta)
        assert report.residuals[0] < 1e-8

    def test_random_form_on_perturbed_field(self, perturbed):
        report = identities.weitzenboeck_forms_residual(perturbed, seed=4)
        assert report.passed
        assert report.residuals == sorted(report.residuals, reverse=True)
        assert len([line for line in report.details if "Bochner" in line]) == 3

    def test_bochner(self, perturbed):
        report = identities.bochner_residual(perturbed, seed=4)
        assert report.passed
        assert report.order >= 1.0

    def test_callable_beta(self, perturbed):
        report = identities.weitzenboeck_forms_residual(
            perturbed[:2], beta=lambda grid: identities.random_form(grid, 4)
        )
        expected = identities.weitzenboeck_forms_residual(perturbed[:2], seed=4)
        assert report.residuals == expected.residuals

    def test_metric_property(self, perturbed):
        report = identities.metric_property_residual(perturbed, seed=2)
        assert report.passed
        assert report.order == pytest.approx(2.0, abs=0.4)


class TestLaplacianDouble:
    def test_trivial_cylinder(self, trivial):
        report = identities.laplacian_double_identity(trivial)
        assert report.passed

    def test_oracle(self, oracles):
        report = identities.laplacian_double_identity(oracles)
        assert report.passed
        assert max(report.residuals) < 1e-10

    def test_off_shell_is_flagged(self, perturbed):
        report = identities.laplacian_double_identity(perturbed[:1])
        assert any("not on-shell" in line for line in report.details)
