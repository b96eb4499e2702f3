"""Tests for the fundamental equation and its two-form version."""

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


class TestFundamentalEquation:
    def test_trivial_cylinder(self, trivial):
        report = identities.fundamental_equation_residual(trivial)
        assert report.residuals[0] < 1e-10
        assert report.passed
        assert report.resolutions == [32]

    def test_oracle_second_order(self, oracles):
        report = identities.fundamental_equation_residual(oracles)
        assert report.passed
        assert report.order == pytest.approx(2.0, abs=0.4)
        assert report.residuals == sorted(report.residuals, reverse=True)
        assert not any("on-shell" in line for line in report.details)

    def test_off_shell_warning(self, perturbed):
        report = identities.fundamental_equation_residual(perturbed[0])
        assert any("not on-shell" in line for line in report.details)

    def test_oracle_is_on_shell(self, oracles, perturbed):
        assert identities.on_shell(oracles[-1])
        assert not identities.on_shell(perturbed[-1])


class TestTwoFormEquation:
    def test_trivial_cylinder(self, trivial):
        report = identities.two_form_equation_residual(trivial)
        assert report.residuals[0] < 1e-10
        assert report.passed

    def test_off_shell_second_order(self, perturbed):
        report = identities.two_form_equation_residual(perturbed)
        assert report.passed
        assert report.order == pytest.approx(2.0, abs=0.4)

    def test_mixed_torsion_vanishes(self, oracles, perturbed):
        for fields in (oracles, perturbed):
            report = identities.two_form_equation_residual(fields)
            sizes = [float(line.rsplit(" ", 1)[-1]) for line in report.details if "torsion" in line]
            assert len(sizes) == 3
            assert max(sizes) < 1e-5
