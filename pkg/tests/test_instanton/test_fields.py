"""Tests for the flat oracle and the field constructors."""

import numpy as np
import pytest

from contactinstanton import cylfield, errors, instanton, reeb
from contactinstanton import triad as tr


def decaying_circle(epsilon=0.1):
    return lambda tau, t: epsilon * np.exp(-2 * np.pi * (tau + 1j * t))


def grid_of(Nt):
    return cylfield.CylinderGrid(L=1.0, Ntau=Nt + 1, Nt=Nt)


@pytest.fixture(scope="module")
def golden_orbit():
    return reeb.coordinate_orbit(tr.EllipsoidTriad())


class TestOracle:
    def test_constant_data(self):
        grid = grid_of(16)
        w = instanton.oracle_flat(grid, 0.3 + 0.2j, z0=1.5)
        np.testing.assert_allclose(w.nodes[..., 2], 1.5, atol=1e-12)
        assert instanton.functional(w) < 1e-20

    def test_boundary_data(self):
        grid = grid_of(16)
        start = np.sin(2 * np.pi * grid.t)
        w = instanton.oracle_flat(grid, decaying_circle(), z0=(start, 0.25))
        np.testing.assert_array_equal(w.nodes[0, :, 2], start)
        np.testing.assert_array_equal(w.nodes[-1, :, 2], 0.25)

    def test_residuals_are_second_order(self):
        """The height solves the compact closedness equation, so only dbar carries error."""
        reports = [
            cylfield.energies(instanton.oracle_flat(grid_of(Nt), decaying_circle()))
            for Nt in (16, 32, 64)
        ]
        for coarse, fine in zip(reports, reports[1:]):
            assert coarse.res_dbar / fine.res_dbar > 3.0
        assert max(report.res_closed for report in reports) < 1e-10
        assert reports[1].res_dbar < 1e-2

    def test_charge_cross_check(self):
        """The charge agrees with the boundary integral of the composed form."""
        grid = grid_of(32)
        w = instanton.oracle_flat(grid, decaying_circle(0.3), z0=0.1)
        x, y, z = np.moveaxis(w.nodes[:3], -1, 0)

        def one_sided(u):
            return (-3 * u[0] + 4 * u[1] - u[2]) / (2 * grid.htau)

        composed = -(one_sided(z) - y[0] * one_sided(x))
        expected = np.sum(composed) * grid.ht
        assert cylfield.energies(w).Q == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("amplitude", [0.1, 1e-3])
    def test_non_holomorphic_data(self, amplitude):
        grid = grid_of(16)
        with pytest.raises(errors.PreconditionError) as info:
            instanton.oracle_flat(
                grid, lambda tau, t: amplitude * np.exp(-2 * np.pi * (tau - 1j * t))
            )
        assert info.value.residual > 0

    def test_array_data(self):
        grid = grid_of(16)
        tau, t = grid.mesh()
        data = decaying_circle()(tau, t)
        from_array = instanton.oracle_flat(grid, data)
        from_callable = instanton.oracle_flat(grid, decaying_circle())
        np.testing.assert_array_equal(from_array.nodes, from_callable.nodes)


class TestConstructors:
    def test_trivial_cylinder(self, golden_orbit):
        grid = cylfield.CylinderGrid(L=2.0, Ntau=9, Nt=16)
        w = instanton.trivial_cylinder(golden_orbit, grid)
        np.testing.assert_allclose(w.nodes[0], w.nodes[-1], atol=1e-14)
        np.testing.assert_allclose(w.nodes[0], golden_orbit.sample(16), atol=1e-10)

    def test_massless_invariants(self, golden_orbit):
        grid = cylfield.CylinderGrid(L=1.0, Ntau=33, Nt=64)
        report = cylfield.energies(instanton.massless_instanton(golden_orbit, grid, 0.5))
        assert report.Q == pytest.approx(0.5, rel=1e-2)
        assert report.T == pytest.approx(golden_orbit.period, rel=1e-2)
        assert report.E_pi < 1e-12

    def test_initial_guess(self, golden_orbit):
        triad = golden_orbit.triad
        grid = cylfield.CylinderGrid(L=1.0, Ntau=9, Nt=16)
        start = golden_orbit.sample(16)
        end = triad.project(start + 0.1 * np.array([0.0, 0.0, 1.0, 0.0]))
        w = instanton.initial_guess(grid, triad, start, end)
        np.testing.assert_array_equal(w.nodes[0], start)
        np.testing.assert_array_equal(w.nodes[-1], end)
        np.testing.assert_allclose(triad.constraint_value(w.nodes), 0.0, atol=1e-12)

    def test_initial_guess_shapes(self, golden_orbit):
        grid = cylfield.CylinderGrid(L=1.0, Ntau=9, Nt=16)
        with pytest.raises(ValueError):
            instanton.initial_guess(grid, golden_orbit.triad, np.zeros((8, 4)), np.zeros((16, 4)))

    def test_perturbation(self, golden_orbit):
        grid = cylfield.CylinderGrid(L=1.0, Ntau=9, Nt=16)
        w = instanton.trivial_cylinder(golden_orbit, grid)
        perturbed = instanton.perturb_interior(w, 1e-2, seed=1)
        distance = np.linalg.norm(perturbed.nodes - w.nodes, axis=-1)
        np.testing.assert_array_equal(distance[[0, -1]], 0.0)
        assert 5e-3 < np.max(distance) < 1.1e-2
        again = instanton.perturb_interior(w, 1e-2, seed=1)
        np.testing.assert_array_equal(again.nodes, perturbed.nodes)

    def test_negative_amplitude(self, golden_orbit):
        grid = cylfield.CylinderGrid(L=1.0, Ntau=9, Nt=16)
        with pytest.raises(ValueError):
            instanton.perturb_interior(instanton.trivial_cylinder(golden_orbit, grid), -1.0)
