r"""The asymptotic operator :math:`A_z` of a closed Reeb orbit.

On sections :math:`\eta` of :math:`z^*\xi`,

.. math:: A_z\eta = J\nabla^\pi_t\eta - \tfrac12 T(\mathcal{L}_{X_\lambda}J)\eta.

In the unitary frame along :math:`z` with :math:`\kappa = T\alpha(X_\lambda)`, this is
:math:`J_0\dot c - \kappa c - \frac T2\hat L c`. The rotation
:math:`c = R(\beta)d` with :math:`\beta' = -\kappa - \psi` turns it into
:math:`J_0\dot d + M d`, :math:`M = \psi - \frac T2 R(\beta)^\top\hat L R(\beta)`, where
the constant :math:`\psi` is the holonomy angle of :math:`\nabla^\pi` around the orbit,
taken on the principal branch so that :math:`d` stays periodic.

The first coordinate of :math:`d` lives on the nodes :math:`t_j = jh` and the second
on the half nodes :math:`t_{j + 1/2}`, so that :math:`J_0 d/dt` is a compact
difference without spurious modes; the zero-order terms are averaged from samples
at quarter nodes, which keeps the matrix symmetric whenever :math:`M` is.
"""

import dataclasses
import logging

import numpy as np
import scipy.integrate
import scipy.linalg

from contactinstanton import config, errors
from contactinstanton.triad import connection_form, lie_derivative_matrix

from ._orbits import ClosedOrbit

__all__ = [
    "SpectrumResult",
    "KernelCorrespondence",
    "assemble_Az",
    "near_kernel_threshold",
    "kernel_correspondence_check",
]

logger = logging.getLogger(__name__)

_J0 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclasses.dataclass(frozen=True)
class SpectrumResult:
    r"""Eigendata of the discretized :math:`A_z`.

    ``gap`` is :math:`\min|\mu|` over the eigenvalues, ``positive_gap`` the smallest
    positive eigenvalue, which is the decay rate of the stable evolution
    :math:`\partial_\tau\zeta + A_z\zeta = 0` on the positive half-cylinder.
    Eigenvectors are columns in the coordinates ``(d_1 at nodes, d_2 at half nodes)``.
    ``asymmetry`` is the largest asymmetry of the zero-order matrices :math:`M` over the
    quarter nodes; the staggered matrix is symmetric exactly when they are.
    """

    orbit: ClosedOrbit
    Nt: int
    eigenvalues: np.ndarray
    gap: float
    positive_gap: float
    eigenvectors: np.ndarray
    matrix: np.ndarray
    holonomy: float
    asymmetry: float

    def near_kernel_dimension(self, threshold=None):
        threshold = near_kernel_threshold(self.Nt) if threshold is None else threshold
        return int(np.count_nonzero(np.abs(self.eigenvalues) < threshold))


@dataclasses.dataclass(frozen=True)
class KernelCorrespondence:
    r"""Near-kernel dimension of ``A_z`` against eigenvalues of the return map near one.

    ``alternative_kernel`` counts the near kernel of the operator with the zero-order
    term :math:`-\frac T2 J(\mathcal{L}_{X_\lambda}J)`; ``conventions_agree`` flags
    whether both conventions see the same kernel.
    """

    kernel_dimension: int
    floquet_count: int
    alternative_kernel: int
    threshold: float

    @property
    def agree(self):
        return self.kernel_dimension == self.floquet_count

    @property
    def conventions_agree(self):
        return self.kernel_dimension == self.alternative_kernel


def near_kernel_threshold(Nt):
    """Eigenvalues below ``kernel_factor * h**2 * 2 pi`` count as zero."""
    h = 1.0 / Nt
    return config.TOLERANCES["kernel_factor"] * h ** 2 * 2.0 * np.pi


def _rotation(angle):
    cos, sin = np.cos(angle), np.sin(angle)
    return np.stack(
        [np.stack([cos, -sin], axis=-1), np.stack([sin, cos], axis=-1)], axis=-2
    )


def _zero_order_samples(orbit, Nt, alternative):
    """Holonomy and the matrices M at the quarter nodes ``k h / 4``."""
    triad, period = orbit.triad, orbit.period
    fractions = np.arange(4 * Nt + 1) / (4 * Nt)
    points = orbit.sample_at(fractions)
    kappa = connection_form(triad, points, period * triad.reeb(points))
    theta = -scipy.integrate.cumulative_trapezoid(kappa, fractions, initial=0.0)
    holonomy = float(np.angle(np.exp(1j * theta[-1])))
    beta = theta - holonomy * fractions
    rot = _rotation(beta[:-1])
    lie = lie_derivative_matrix(triad, points[:-1])
    gauged = np.swapaxes(rot, -1, -2) @ lie @ rot
    if alternative:
        gauged = _J0 @ gauged
    matrices = holonomy * np.eye(2) - 0.5 * period * gauged
    return holonomy, matrices


def _staggered_matrix(matrices, Nt):
    h = 1.0 / Nt
    size = 2 * Nt
    A = np.zeros((size, size))
    quarter = matrices.shape[0]
    for j in range(Nt):
        c1, c2 = j, Nt + j
        c2_prev = Nt + (j - 1) % Nt
        c1_next = (j + 1) % Nt
        A[c1, c1] += matrices[4 * j, 0, 0]
        A[c2, c2] += matrices[4 * j + 2, 1, 1]
        A[c1, c2] += -1.0 / h + 0.5 * matrices[4 * j + 1, 0, 1]
        A[c1, c2_prev] += 1.0 / h + 0.5 * matrices[(4 * j - 1) % quarter, 0, 1]
        A[c2, c1] += -1.0 / h + 0.5 * matrices[4 * j + 1, 1, 0]
        A[c2, c1_next] += 1.0 / h + 0.5 * matrices[4 * j + 3, 1, 0]
    return A


def assemble_Az(orbit: ClosedOrbit, Nt, alternative=False) -> SpectrumResult:
    r"""Assemble the ``2 Nt x 2 Nt`` matrix of :math:`A_z` and its eigendata.

    With ``alternative`` the zero-order term is :math:`-\frac T2 J(\mathcal{L}_{X_\lambda}J)`.

    Raises
    ------
    ValueError
        If ``Nt < 16``.
    AssemblyError
        If the zero-order term is asymmetric beyond the assembly tolerance.
    """
    Nt = int(Nt)
    if Nt < 16:
        raise ValueError("A_z needs at least 16 nodes.")
    holonomy, matrices = _zero_order_samples(orbit, Nt, alternative)
    asymmetry = float(np.max(np.abs(matrices - np.swapaxes(matrices, -1, -2))))
    if asymmetry > config.TOLERANCES["assembly"]:
        raise errors.AssemblyError(
            f"The zero-order term of A_z is asymmetric by {asymmetry:.3e}; "
            "the Lie derivative of J is not symmetric along the orbit."
        )
    A = _staggered_matrix(matrices, Nt)
    A = 0.5 * (A + A.T)
    eigenvalues, eigenvectors = scipy.linalg.eigh(A)
    positive = eigenvalues[eigenvalues > 0]
    result = SpectrumResult(
        orbit=orbit,
        Nt=Nt,
        eigenvalues=eigenvalues,
        gap=float(np.min(np.abs(eigenvalues))),
        positive_gap=float(positive[0]) if positive.size else np.nan,
        eigenvectors=eigenvectors,
        matrix=A,
        holonomy=holonomy,
        asymmetry=asymmetry,
    )
    logger.info(
        "A_z with Nt=%d: holonomy %.6f, gap %.6g, asymmetry %.2e",
        Nt,
        holonomy,
        result.gap,
        asymmetry,
    )
    return result


def kernel_correspondence_check(orbit: ClosedOrbit, Nt=128) -> KernelCorrespondence:
    """Compare the near kernel of ``A_z`` with the return-map eigenvalues near one."""
    threshold = near_kernel_threshold(Nt)
    spectrum = assemble_Az(orbit, Nt)
    alternative = assemble_Az(orbit, Nt, alternative=True)
    floquet_count = int(np.count_nonzero(np.abs(orbit.floquet - 1.0) < threshold))
    report = KernelCorrespondence(
        kernel_dimension=spectrum.near_kernel_dimension(threshold),
        floquet_count=floquet_count,
        alternative_kernel=alternative.near_kernel_dimension(threshold),
        threshold=threshold,
    )
    if not report.conventions_agree:
        logger.warning(
            "Zero-order conventions disagree: kernel %d against %d",
            report.kernel_dimension,
            report.alternative_kernel,
        )
    return report
