"""Tests for the builtin triads and their pointwise geometry."""

import numpy as np
import pytest

from contactinstanton import errors
from contactinstanton import triad as tr

TRIAD_IDS = [
    "r3-standard",
    "ellipsoid:a1=1.0,a2=1.618033988749895",
    "ellipsoid-perturbed:seed=7",
]

all_triads = pytest.mark.parametrize("triad_id", TRIAD_IDS)


@pytest.fixture
def rng():
    return np.random.default_rng(seed=42)


@all_triads
def test_invariants_on_thousand_points(triad_id, rng):
    """All defining identities hold at a thousand random points."""
    triad = tr.triad_from_id(triad_id)
    points = triad.sample_points(rng, 1000)
    residuals, passed = tr.check_triad_invariants(triad, points, rng)
    assert passed, residuals
    assert residuals["taming"] > 0


@all_triads
def test_unitary_frame_is_orthonormal(triad_id, rng):
    """The unitary frame is orthonormal, lies in xi and satisfies e2 = J e1."""
    triad = tr.triad_from_id(triad_id)
    points = triad.sample_points(rng, 50)
    frame = triad.unitary_frame(points)
    gram = np.swapaxes(frame, -1, -2) @ triad.metric_matrix(points) @ frame
    np.testing.assert_allclose(gram, np.broadcast_to(np.eye(2), gram.shape), atol=1e-10)
    np.testing.assert_allclose(
        np.einsum("...i,...ik->...k", triad.lam(points), frame), 0.0, atol=1e-10
    )
    np.testing.assert_allclose(
        triad.cstruct(points) @ frame[..., 0:1], frame[..., 1:2], atol=1e-10
    )


def test_triad_id_round_trip():
    """Identifiers map back to equal triads."""
    for triad_id in TRIAD_IDS:
        triad = tr.triad_from_id(triad_id)
        assert tr.triad_from_id(triad.triad_id) == triad


@pytest.mark.parametrize("bogus", ["bogus", "ellipsoid:a3=1", "ellipsoid:a1=-1"])
def test_unknown_triad_id(bogus):
    with pytest.raises(ValueError):
        tr.triad_from_id(bogus)


def test_projection_onto_ellipsoid(rng):
    """Projected points satisfy the constraint and projection is idempotent."""
    triad = tr.EllipsoidTriad()
    points = triad.project(1.0 + 0.1 * rng.standard_normal((200, 4)))
    assert np.max(np.abs(triad.constraint_value(points))) < 1e-12
    np.testing.assert_allclose(triad.project(points), points, atol=1e-14)


def test_project_xi_flat_examples():
    """Projection examples of the flat model."""
    triad = tr.FlatContactTriad()
    p = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(tr.project_xi(triad, p, [1.0, 0.0, 0.0]), [1.0, 0.0, 2.0])
    np.testing.assert_allclose(tr.project_xi(triad, p, triad.reeb(p)), 0.0)
    v = np.array([1.0, -1.0, 2.0])
    np.testing.assert_allclose(tr.project_xi(triad, p, v), v)


@all_triads
def test_project_xi_kills_lambda(triad_id, rng):
    triad = tr.triad_from_id(triad_id)
    points = triad.sample_points(rng, 20)
    vectors = np.einsum(
        "...ij,...j->...i", triad.tangent_projector(points), rng.standard_normal(points.shape)
    )
    projected = tr.project_xi(triad, points, vectors)
    assert np.max(np.abs(np.sum(triad.lam(points) * projected, axis=-1))) < 1e-12


def test_project_xi_base_mismatch():
    """Tangent vectors based elsewhere are rejected."""
    triad = tr.FlatContactTriad()
    p = tr.TriadPoint([0.0, 0.0, 0.0], triad.triad_id)
    q = tr.TriadPoint([1.0, 0.0, 0.0], triad.triad_id)
    with pytest.raises(errors.ContractViolationError):
        tr.project_xi(triad, p, tr.Tangent(q, [1.0, 0.0, 0.0]))
    projected = tr.project_xi(triad, p, tr.Tangent(p, [0.0, 0.0, 1.0]))
    assert isinstance(projected, tr.Tangent)


def test_triad_metric_examples(rng):
    triad = tr.FlatContactTriad()
    p = np.zeros(3)
    assert tr.triad_metric(triad, p, [0.0, 1.0, 0.0], [0.0, 1.0, 0.0]) == pytest.approx(1.0)
    reeb = triad.reeb(p)
    assert tr.triad_metric(triad, p, reeb, reeb) == pytest.approx(1.0)
    xi_vec = tr.project_xi(triad, p, rng.standard_normal(3))
    assert tr.triad_metric(triad, p, reeb, xi_vec) == pytest.approx(0.0, abs=1e-14)


@all_triads
def test_triad_metric_symmetric_positive(triad_id, rng):
    triad = tr.triad_from_id(triad_id)
    points = triad.sample_points(rng, 30)
    metric = triad.metric_matrix(points)
    basis = triad.tangent_basis(points)
    restricted = np.swapaxes(basis, -1, -2) @ metric @ basis
    np.testing.assert_allclose(restricted, np.swapaxes(restricted, -1, -2), atol=1e-12)
    assert np.all(np.linalg.eigvalsh(restricted) > 0)


class TestCompatibilize:
    """Polar construction of compatible complex structures."""

    @pytest.fixture
    def setup(self, rng):
        triad = tr.EllipsoidTriad()
        return triad, triad.sample_points(rng, 10)

    def test_compatible_metric_is_fixed(self, setup):
        triad, points = setup
        np.testing.assert_allclose(
            tr.compatibilize(triad, points, triad.metric_matrix(points)),
            triad.cstruct(points),
            atol=1e-12,
        )

    def test_scale_invariance(self, setup):
        triad, points = setup
        np.testing.assert_allclose(
            tr.compatibilize(triad, points, 2.0 * triad.metric_matrix(points)),
            triad.cstruct(points),
            atol=1e-12,
        )

    def test_random_metric(self, setup, rng):
        triad, points = setup
        raw = rng.standard_normal((10, 4, 4))
        hmat = raw @ np.swapaxes(raw, -1, -2) + 0.1 * np.eye(4)
        cstruct = tr.compatibilize(triad, points, hmat)
        xi = triad.xi_basis(points)
        omega = triad.dlam(points)
        on_xi = cstruct @ xi
        np.testing.assert_allclose(cstruct @ on_xi, -xi, atol=1e-12)
        invariance = np.swapaxes(on_xi, -1, -2) @ omega @ on_xi
        np.testing.assert_allclose(invariance, np.swapaxes(xi, -1, -2) @ omega @ xi, atol=1e-12)
        taming = np.swapaxes(xi, -1, -2) @ omega @ on_xi
        assert np.all(np.linalg.eigvalsh(0.5 * (taming + np.swapaxes(taming, -1, -2))) > 0)

    def test_degenerate_metric(self, setup):
        triad, points = setup
        with pytest.raises(errors.SingularFormError):
            tr.compatibilize(triad, points[0], np.zeros((4, 4)))


class TestLieDerivative:
    """Lie derivative of J along the Reeb field."""

    def test_flat_finite_difference_vanishes(self, rng):
        triad = tr.FlatContactTriad()
        points = triad.sample_points(rng, 20)
        lie = tr.lie_derivative_J(triad, points, use_analytic=False, step=1e-4)
        assert np.max(np.abs(lie)) < 1e-8

    def test_sasakian_ellipsoid_vanishes(self, rng):
        triad = tr.EllipsoidTriad()
        points = triad.sample_points(rng, 20)
        lie = tr.lie_derivative_matrix(triad, points, use_analytic=False)
        assert np.max(np.abs(lie)) < 1e-7

    def test_perturbed_structure(self, rng):
        """Anticommutes with J, is symmetric and so is its product with J."""
        triad = tr.PerturbedEllipsoidTriad(seed=7)
        points = triad.sample_points(rng, 20)
        lie = tr.lie_derivative_matrix(triad, points)
        j0 = np.array([[0.0, -1.0], [1.0, 0.0]])
        assert np.max(np.abs(lie)) > 1e-3
        np.testing.assert_allclose(lie @ j0 + j0 @ lie, 0.0, atol=1e-6)
        np.testing.assert_allclose(lie, np.swapaxes(lie, -1, -2), atol=1e-6)
        lie_j = lie @ j0
        np.testing.assert_allclose(lie_j, np.swapaxes(lie_j, -1, -2), atol=1e-6)
