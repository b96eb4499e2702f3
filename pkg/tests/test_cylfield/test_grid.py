"""Tests for cylinder grids and the field types."""

import numpy as np
import pytest

from contactinstanton import cylfield, errors
from contactinstanton import triad as tr


def test_grid_widths():
    grid = cylfield.CylinderGrid(L=2.0, Ntau=11, Nt=16)
    assert grid.htau == pytest.approx(0.2)
    assert grid.ht == pytest.approx(1.0 / 16)
    assert grid.shape == (11, 16)
    np.testing.assert_allclose(grid.tau[[0, -1]], [0.0, 2.0])
    assert grid.flat_index(1, 17) == grid.flat_index(1, 1)


def test_refined_grid_halves_widths():
    grid = cylfield.CylinderGrid(L=1.0, Ntau=9, Nt=8)
    fine = grid.refine()
    assert fine.htau == pytest.approx(0.5 * grid.htau)
    assert fine.ht == pytest.approx(0.5 * grid.ht)
    np.testing.assert_allclose(fine.tau[::2], grid.tau)


@pytest.mark.parametrize("shape", [(7, 8), (8, 7)])
def test_grid_too_small(shape):
    with pytest.raises(ValueError):
        cylfield.CylinderGrid(L=1.0, Ntau=shape[0], Nt=shape[1])


def test_grid_length_positive():
    with pytest.raises(ValueError):
        cylfield.CylinderGrid(L=0.0, Ntau=8, Nt=8)


def test_map_field_checks_constraint():
    triad = tr.EllipsoidTriad()
    grid = cylfield.CylinderGrid(L=1.0, Ntau=8, Nt=8)
    nodes = np.ones(grid.shape + (4,))
    with pytest.raises(ValueError):
        cylfield.MapField(grid, nodes, triad)


def test_map_field_checks_shape():
    grid = cylfield.CylinderGrid(L=1.0, Ntau=8, Nt=8)
    with pytest.raises(ValueError):
        cylfield.MapField(grid, np.zeros((8, 8, 4)), tr.FlatContactTriad())


def test_map_field_is_read_only():
    grid = cylfield.CylinderGrid(L=1.0, Ntau=8, Nt=8)
    field = cylfield.MapField(grid, np.zeros(grid.shape + (3,)), tr.FlatContactTriad())
    with pytest.raises(ValueError):
        field.nodes[0, 0, 0] = 1.0
    assert field.node(0, 9).triad_id == "r3-standard"


def test_xi_section_rejects_reeb_vectors():
    grid = cylfield.CylinderGrid(L=1.0, Ntau=8, Nt=8)
    triad = tr.FlatContactTriad()
    field = cylfield.MapField(grid, np.zeros(grid.shape + (3,)), triad)
    with pytest.raises(errors.ContractViolationError):
        cylfield.XiSection(base=field, vecs=triad.reeb(field.nodes))


def test_one_form_compose_j():
    form = cylfield.OneForm(a_tau=np.array([1.0]), a_t=np.array([2.0]))
    composed = form.compose_j()
    np.testing.assert_allclose(composed.a_tau, [2.0])
    np.testing.assert_allclose(composed.a_t, [-1.0])
