"""Tests for the assembly and spectrum of the asymptotic operator."""

import numpy as np
import pytest

from contactinstanton import config, errors, reeb
from contactinstanton import triad as tr
from contactinstanton.reeb import _spectrum


@pytest.fixture(scope="module")
def golden_orbit():
    return reeb.coordinate_orbit(tr.EllipsoidTriad())


@pytest.fixture(scope="module")
def round_orbit():
    return reeb.coordinate_orbit(tr.EllipsoidTriad(a1=1.0, a2=1.0))


@pytest.fixture(scope="module")
def perturbed_orbit():
    return reeb.coordinate_orbit(tr.PerturbedEllipsoidTriad(seed=5))


@pytest.fixture(scope="module")
def golden_spectrum(golden_orbit):
    return reeb.assemble_Az(golden_orbit, 128)


def _wrapped_difference(first, second):
    return abs(np.angle(np.exp(1j * (first - second))))


class TestSasakian:
    def test_holonomy_is_return_angle(self, golden_orbit, golden_spectrum):
        """Parallel transport around the orbit is the linearized return map."""
        psi = golden_orbit.return_map
        angle = np.arctan2(psi[1, 0], psi[0, 0])
        assert _wrapped_difference(golden_spectrum.holonomy, angle) < 1e-6

    def test_closed_form_spectrum(self, golden_spectrum):
        """The spectrum is the holonomy shifted by multiples of 2 pi."""
        holonomy = golden_spectrum.holonomy
        eigenvalues = golden_spectrum.eigenvalues
        by_size = eigenvalues[np.argsort(np.abs(eigenvalues - holonomy))]
        np.testing.assert_allclose(by_size[:2], holonomy, atol=1e-8)
        for shift in (2 * np.pi, -2 * np.pi):
            closest = eigenvalues[np.argsort(np.abs(eigenvalues - holonomy - shift))[:2]]
            np.testing.assert_allclose(closest, holonomy + shift, atol=5e-3)

    def test_gap(self, golden_spectrum):
        assert golden_spectrum.gap == pytest.approx(np.min(np.abs(golden_spectrum.eigenvalues)))
        assert golden_spectrum.gap > 0.5
        assert golden_spectrum.positive_gap >= golden_spectrum.gap
        assert golden_spectrum.near_kernel_dimension() == 0

    def test_gap_stable_under_refinement(self, golden_orbit, golden_spectrum):
        fine = reeb.assemble_Az(golden_orbit, 256)
        assert fine.gap == pytest.approx(golden_spectrum.gap, rel=5e-4)

    def test_base_point_invariance(self, golden_orbit, golden_spectrum):
        shifted = reeb.assemble_Az(golden_orbit.shifted(0.3), 128)
        np.testing.assert_allclose(shifted.eigenvalues, golden_spectrum.eigenvalues, atol=1e-9)

    def test_matrix_symmetric(self, golden_spectrum):
        assert golden_spectrum.matrix.shape == (256, 256)
        np.testing.assert_array_equal(golden_spectrum.matrix, golden_spectrum.matrix.T)


def test_round_orbit_kernel(round_orbit):
    spectrum = reeb.assemble_Az(round_orbit, 64)
    assert spectrum.near_kernel_dimension() == 2
    assert spectrum.gap < 1e-6


@pytest.mark.parametrize(
    "name, expected", [("golden_orbit", 0), ("round_orbit", 2), ("perturbed_orbit", None)]
)
def test_kernel_correspondence(name, expected, request):
    report = reeb.kernel_correspondence_check(request.getfixturevalue(name), Nt=64)
    assert report.agree
    if expected is not None:
        assert report.kernel_dimension == expected
        assert report.floquet_count == expected


class TestPerturbed:
    def test_assembly_is_symmetric(self, perturbed_orbit):
        spectrum = reeb.assemble_Az(perturbed_orbit, 64)
        assert spectrum.asymmetry < 1e-6

    def test_gap_converges(self, perturbed_orbit):
        coarse = reeb.assemble_Az(perturbed_orbit, 128)
        fine = reeb.assemble_Az(perturbed_orbit, 256)
        assert fine.gap == pytest.approx(coarse.gap, rel=5e-3)

    def test_zero_order_term_enters(self, perturbed_orbit):
        """A non-invariant J moves the spectrum off the holonomy lattice."""
        spectrum = reeb.assemble_Az(perturbed_orbit, 64)
        offsets = np.angle(np.exp(1j * (spectrum.eigenvalues - spectrum.holonomy)))
        assert np.max(np.abs(offsets)) > 1e-3


def test_too_few_nodes(golden_orbit):
    with pytest.raises(ValueError):
        reeb.assemble_Az(golden_orbit, 8)


def skewed(triad, points):
    out = np.zeros(np.shape(points)[:-1] + (2, 2))
    out[..., 0, 1] = 1.0
    return out


def test_asymmetric_assembly_raises(golden_orbit, monkeypatch):
    monkeypatch.setattr(_spectrum, "lie_derivative_matrix", skewed)
    with pytest.raises(errors.AssemblyError):
        reeb.assemble_Az(golden_orbit, 16)


def test_asymmetry_measures_zero_order_term(golden_orbit, monkeypatch):
    """The staggered matrix stays symmetric; the defect is read off the zero-order term."""
    monkeypatch.setattr(_spectrum, "lie_derivative_matrix", skewed)
    with config.tolerance_context(assembly=10.0):
        spectrum = reeb.assemble_Az(golden_orbit, 16)
    assert spectrum.asymmetry == pytest.approx(0.5 * golden_orbit.period)
    np.testing.assert_array_equal(spectrum.matrix, spectrum.matrix.T)
