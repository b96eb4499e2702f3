"""Tests for the reconstruction of the symplectization coordinate."""

import numpy as np
import pytest

from contactinstanton import cylfield, decay, errors, instanton, reeb
from contactinstanton import triad as tr


@pytest.fixture(scope="module")
def golden_orbit():
    return reeb.coordinate_orbit(tr.EllipsoidTriad())


@pytest.fixture(scope="module")
def grid():
    return cylfield.CylinderGrid(L=2.0, Ntau=17, Nt=32)


def test_trivial_cylinder(golden_orbit, grid):
    report = decay.reconstruct_a(instanton.trivial_cylinder(golden_orbit, grid))
    assert report.loop_residual < 1e-12
    assert report.T == pytest.approx(golden_orbit.period, rel=(2 * np.pi * grid.ht) ** 2)
    # the orbit nodes carry the RK4 error of the flow
    assert np.max(report.deviation) < 1e-9
    np.testing.assert_allclose(report.a[:, 0], report.T * grid.tau, atol=1e-12)


def test_explicit_period(golden_orbit, grid):
    w = instanton.trivial_cylinder(golden_orbit, grid)
    report = decay.reconstruct_a(w, T=golden_orbit.period)
    assert report.T == golden_orbit.period
    assert report.deviation[0] == pytest.approx(
        abs(report.T - decay.reconstruct_a(w).T) * grid.L, rel=1e-6
    )


def test_nonzero_charge(golden_orbit, grid):
    w = instanton.massless_instanton(golden_orbit, grid, charge=0.5)
    with pytest.raises(errors.NotExactError):
        decay.reconstruct_a(w)


def test_flat_oracle_converges_to_constant():
    grid = cylfield.CylinderGrid(L=1.5, Ntau=193, Nt=128)
    tau, t = grid.mesh()
    w = instanton.oracle_flat(grid, 0.3 * np.exp(-2 * np.pi * (tau + 1j * t)))
    report = decay.reconstruct_a(w)
    assert report.loop_residual < 1e-10
    assert abs(report.T) < 1e-6
    early, late = np.searchsorted(grid.tau, [0.1, 1.0])
    assert report.deviation[late] < 0.1 * report.deviation[early]
