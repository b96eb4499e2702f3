"""Tests for pullbacks, the pi-parts of dw and the energy invariants."""

import numpy as np
import pytest

from contactinstanton import cylfield
from contactinstanton import triad as tr
from contactinstanton import utils


def circle_field(grid, triad, charge=0.0):
    r"""The map :math:`\gamma(-Q\tau + Tt)` over the :math:`z_1`-circle of an ellipsoid."""
    period = triad.orbit_period(1)
    tau, t = grid.mesh()
    angle = 2.0 * (-charge * tau + period * t) / triad.a1
    nodes = np.zeros(grid.shape + (4,))
    nodes[..., 0] = np.sqrt(triad.a1) * np.cos(angle)
    nodes[..., 1] = np.sqrt(triad.a1) * np.sin(angle)
    return cylfield.MapField(grid, nodes, triad)


def smooth_flat_modes(grid, seed=0):
    """Values and exact tau-derivatives of a field built from random Fourier modes."""
    rng = utils.named_generator(seed, "smooth-field")
    tau, t = grid.mesh()
    values = np.zeros(grid.shape + (3,))
    derivative = np.zeros(grid.shape + (3,))
    for k in range(3):
        c = rng.standard_normal(4)
        wave = np.cos(2 * np.pi * t + c[1]) * np.exp(-0.5 * tau)
        values[..., k] = c[0] * wave + c[2] * np.sin(2 * np.pi * t) * tau + c[3] * tau ** 2
        derivative[..., k] = -0.5 * c[0] * wave + c[2] * np.sin(2 * np.pi * t) + 2 * c[3] * tau
    return values, derivative


def smooth_flat_field(grid, seed=0):
    values, _ = smooth_flat_modes(grid, seed)
    return cylfield.MapField(grid, values, tr.FlatContactTriad())


def holomorphic_flat_field(grid, conjugate=False, epsilon=0.1):
    r"""The graph of :math:`x + iy = \epsilon e^{-2\pi(\tau + it)}` (or its conjugate)."""
    tau, t = grid.mesh()
    f = epsilon * np.exp(-2 * np.pi * (tau + 1j * t))
    if conjugate:
        f = np.conj(f)
    nodes = np.stack([f.real, f.imag, np.zeros(grid.shape)], axis=-1)
    return cylfield.MapField(grid, nodes, tr.FlatContactTriad())


@pytest.fixture
def ellipsoid():
    return tr.EllipsoidTriad()


@pytest.fixture
def grid():
    return cylfield.CylinderGrid(L=1.0, Ntau=9, Nt=32)


class TestPullback:
    def test_trivial_cylinder(self, grid, ellipsoid):
        form = cylfield.pullback_lambda(circle_field(grid, ellipsoid))
        period = ellipsoid.orbit_period(1)
        np.testing.assert_allclose(form.a_tau, 0.0, atol=1e-12)
        np.testing.assert_allclose(form.a_t, period, rtol=(2 * np.pi * grid.ht) ** 2)

    def test_massless_instanton(self, grid, ellipsoid):
        form = cylfield.pullback_lambda(circle_field(grid, ellipsoid, charge=0.3))
        np.testing.assert_allclose(form.a_tau, -0.3, rtol=1e-2)
        np.testing.assert_allclose(form.a_t, ellipsoid.orbit_period(1), rtol=1e-2)

    def test_constant_map(self, grid):
        field = cylfield.MapField(grid, np.ones(grid.shape + (3,)), tr.FlatContactTriad())
        form = cylfield.pullback_lambda(field)
        assert np.all(form.a_tau == 0.0)
        assert np.all(form.a_t == 0.0)

    def test_second_order(self):
        coarse = cylfield.CylinderGrid(L=1.0, Ntau=17, Nt=16)
        errors = []
        for grid in (coarse, coarse.refine()):
            values, derivative = smooth_flat_modes(grid)
            field = cylfield.MapField(grid, values, tr.FlatContactTriad())
            exact = np.sum(field.triad.lam(values) * derivative, axis=-1)
            errors.append(np.max(np.abs(cylfield.pullback_lambda(field).a_tau - exact)))
        assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.2)


class TestDbar:
    def test_trivial_cylinder(self, grid, ellipsoid):
        section = cylfield.dbar_pi(circle_field(grid, ellipsoid))
        np.testing.assert_allclose(section.vecs, 0.0, atol=1e-10)

    def test_holomorphic_graph_refines(self):
        coarse = cylfield.CylinderGrid(L=1.0, Ntau=17, Nt=16)
        norms = [
            np.max(np.abs(cylfield.dbar_pi(holomorphic_flat_field(grid)).vecs))
            for grid in (coarse, coarse.refine())
        ]
        assert norms[0] / norms[1] == pytest.approx(4.0, rel=0.2)

    def test_antiholomorphic_graph(self):
        grid = cylfield.CylinderGrid(L=1.0, Ntau=33, Nt=32)
        field = holomorphic_flat_field(grid, conjugate=True)
        dbar = cylfield.dbar_pi(field)
        partial = cylfield.partial_pi(field)
        assert np.max(np.abs(partial.vecs)) < 0.1 * np.max(np.abs(dbar.vecs))
        assert np.max(np.abs(dbar.vecs)) > 0.1

    def test_sections_lie_in_xi(self, ellipsoid):
        grid = cylfield.CylinderGrid(L=1.0, Ntau=8, Nt=8)
        rng = np.random.default_rng(4)
        nodes = ellipsoid.project(rng.standard_normal(grid.shape + (4,)))
        field = cylfield.MapField(grid, nodes, ellipsoid)
        for section in (cylfield.dbar_pi(field), cylfield.partial_pi(field)):
            lam = np.sum(ellipsoid.lam(nodes) * section.vecs, axis=-1)
            np.testing.assert_allclose(lam, 0.0, atol=1e-10)


class TestEnergies:
    def test_trivial_cylinder(self, grid, ellipsoid):
        report = cylfield.energies(circle_field(grid, ellipsoid))
        period = ellipsoid.orbit_period(1)
        assert report.E_pi == pytest.approx(0.0, abs=1e-20)
        assert report.T == pytest.approx(period, rel=(2 * np.pi * grid.ht) ** 2)
        assert report.Q == pytest.approx(0.0, abs=1e-12)
        assert report.res_dbar < 1e-10

    def test_massless_instanton(self, grid, ellipsoid):
        report = cylfield.energies(circle_field(grid, ellipsoid, charge=0.3))
        assert report.T == pytest.approx(ellipsoid.orbit_period(1), rel=1e-2)
        assert report.Q == pytest.approx(0.3, rel=1e-2)
        assert report.E_pi < 1e-20
        assert report.res_dbar < 1e-10

    def test_constant_map(self, grid):
        field = cylfield.MapField(grid, np.zeros(grid.shape + (3,)), tr.FlatContactTriad())
        report = cylfield.energies(field)
        assert (report.E_pi, report.T, report.Q) == (0.0, 0.0, 0.0)

    def test_energy_nonnegative(self, grid):
        assert cylfield.energies(smooth_flat_field(grid)).E_pi > 0.0

    def test_total_density_dominates(self, grid):
        field = smooth_flat_field(grid)
        assert np.all(
            cylfield.total_energy_density(field) >= cylfield.energy_density(field)
        )


class TestIdentities:
    def test_algebraic_identities(self, grid):
        report = cylfield.check_energy_identities(smooth_flat_field(grid))
        assert report.residuals["density_split"] < 1e-12 * 100
        assert report.residuals["lambda_wedge"] < 1e-12 * 100
        assert not report.onshell_applicable

    def test_two_form_identity_converges(self):
        coarse = cylfield.CylinderGrid(L=1.0, Ntau=17, Nt=16)
        grids = [coarse, coarse.refine(), coarse.refine().refine()]
        residuals = [
            cylfield.check_energy_identities(smooth_flat_field(g)).residuals["two_form"]
            for g in grids
        ]
        order = utils.convergence_order([g.ht for g in grids], residuals)
        assert order == pytest.approx(2.0, abs=0.3)

    def test_onshell_on_circle(self, grid, ellipsoid):
        report = cylfield.check_energy_identities(circle_field(grid, ellipsoid))
        assert report.onshell_applicable
        assert report.residuals["onshell"] < 1e-10


class TestSlices:
    def test_massless_instanton(self, grid, ellipsoid):
        table = cylfield.charge_action_slices(circle_field(grid, ellipsoid, charge=0.3))
        np.testing.assert_allclose(table.charge, 0.3, rtol=1e-2)
        np.testing.assert_allclose(table.balance, table.balance[0], atol=1e-12)
        assert len(list(table.rows())) == grid.Ntau

    def test_trivial_cylinder(self, grid, ellipsoid):
        table = cylfield.charge_action_slices(circle_field(grid, ellipsoid))
        np.testing.assert_allclose(
            table.action, ellipsoid.orbit_period(1), rtol=(2 * np.pi * grid.ht) ** 2
        )

    def test_random_field_varies(self, grid):
        table = cylfield.charge_action_slices(smooth_flat_field(grid, seed=3))
        assert np.std(table.charge) > 1e-3


class TestMapFieldFiles:
    def test_round_trip(self, tmp_path, ellipsoid):
        grid = cylfield.CylinderGrid(L=np.pi / 3, Ntau=8, Nt=8)
        nodes = ellipsoid.project(np.random.default_rng(2).standard_normal(grid.shape + (4,)))
        field = cylfield.MapField(grid, nodes, ellipsoid)
        path = tmp_path / "field.txt"
        cylfield.write_map_field(path, field)
        loaded = cylfield.read_map_field(path)
        assert loaded.triad.triad_id == ellipsoid.triad_id
        assert loaded.grid == grid
        assert np.array_equal(loaded.nodes, field.nodes)

    def test_header_line(self, tmp_path, grid):
        field = smooth_flat_field(grid)
        path = tmp_path / "field.txt"
        cylfield.write_map_field(path, field)
        header, first = path.read_text().splitlines()[:2]
        assert header == "r3-standard 1 9 32"
        assert first.startswith("0 0 ")

    def test_missing_nodes(self, tmp_path, grid):
        path = tmp_path / "field.txt"
        cylfield.write_map_field(path, smooth_flat_field(grid))
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-1]))
        with pytest.raises(ValueError):
            cylfield.read_map_field(path)
