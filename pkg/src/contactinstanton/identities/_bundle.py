r"""Discrete calculus on forms over the cylinder with values in :math:`w^*\xi`.

Sections are complex arrays of coordinates in the unitary frame :math:`(e_1, Je_1)`,
so :math:`J` is multiplication by :math:`i` and :math:`\nabla^\pi = d + i\,A` with the
pulled-back rotation form :math:`A = w^*\alpha`. One-forms are pairs
``(beta_tau, beta_t)``, two-forms the coefficient of :math:`d\tau\wedge dt`. The domain
metric is :math:`d\tau^2 + dt^2` with :math:`*\beta = -\beta\circ j`, that is
:math:`*(\beta_\tau, \beta_t) = (-\beta_t, \beta_\tau)`.
"""

import dataclasses

import numpy as np

from contactinstanton import utils
from contactinstanton.cylfield import (
    CylinderGrid,
    FieldGeometry,
    MapField,
    d_t,
    d_tau,
    field_geometry,
)
from contactinstanton.triad import connection_form, curvature_form, lie_derivative_matrix

__all__ = [
    "CovariantDifferences",
    "BundleGeometry",
    "bundle_geometry",
    "to_complex",
    "apply_frame_matrix",
    "inner",
    "form_inner",
    "star",
    "wedge",
    "interior",
    "random_form",
]

_BOUNDARY_ROWS = 3


def to_complex(vecs):
    """Complex frame coordinates of sections given as pairs of real coordinates."""
    return vecs[..., 0] + 1j * vecs[..., 1]


def apply_frame_matrix(matrix, sigma):
    """Apply real ``2 x 2`` frame matrices to complex sections."""
    re, im = sigma.real, sigma.imag
    return (matrix[..., 0, 0] * re + matrix[..., 0, 1] * im) + 1j * (
        matrix[..., 1, 0] * re + matrix[..., 1, 1] * im
    )


def inner(first, second):
    """Pointwise real inner product of sections."""
    return np.real(np.conj(first) * second)


def form_inner(first, second):
    """Pointwise inner product of one-forms."""
    return inner(first[0], second[0]) + inner(first[1], second[1])


def star(beta):
    r"""Hodge star :math:`*\beta = -\beta\circ j` of a one-form."""
    beta_tau, beta_t = beta
    return (-beta_t, beta_tau)


def wedge(first, second):
    r"""Coefficient of :math:`\beta_1\wedge\beta_2`, values paired by the inner product."""
    return inner(first[0], second[1]) - inner(first[1], second[0])


def interior(values):
    """Nodes whose nested differences avoid the one-sided end rows.

    Densities built from first differences carry a different error at the end rows,
    which a second difference at distance two turns into an order one defect, so three
    rows are dropped at each end.
    """
    return values[_BOUNDARY_ROWS:-_BOUNDARY_ROWS]


class CovariantDifferences:
    r"""Covariant differences :math:`\nabla = d + iA` on a cylinder grid.

    Without connection coefficients the operators act on ordinary (real or complex)
    forms.
    """

    def __init__(self, grid: CylinderGrid, A_tau=None, A_t=None):
        self.grid = grid
        self.A_tau = A_tau
        self.A_t = A_t

    def tau(self, sigma):
        derivative = d_tau(sigma, self.grid)
        if self.A_tau is None:
            return derivative
        return derivative + 1j * self.A_tau * sigma

    def t(self, sigma):
        derivative = d_t(sigma, self.grid)
        if self.A_t is None:
            return derivative
        return derivative + 1j * self.A_t * sigma

    def d_section(self, sigma):
        return (self.tau(sigma), self.t(sigma))

    def d_one_form(self, beta):
        beta_tau, beta_t = beta
        return self.tau(beta_t) - self.t(beta_tau)

    def delta_one_form(self, beta):
        beta_tau, beta_t = beta
        return -(self.tau(beta_tau) + self.t(beta_t))

    def delta_two_form(self, phi):
        return (self.t(phi), -self.tau(phi))

    def hodge_laplacian(self, beta):
        r""":math:`(d^\nabla\delta^\nabla + \delta^\nabla d^\nabla)\beta`."""
        first = self.d_section(self.delta_one_form(beta))
        second = self.delta_two_form(self.d_one_form(beta))
        return (first[0] + second[0], first[1] + second[1])

    def rough_laplacian(self, beta):
        r""":math:`-\mathrm{Tr}\,\nabla^2\beta`, componentwise on a flat domain."""
        return tuple(-(self.tau(self.tau(part)) + self.t(self.t(part))) for part in beta)

    def gradient_norm_squared(self, beta):
        r""":math:`|\nabla\beta|^2` summed over both derivative directions and components."""
        return sum(
            np.abs(self.tau(part)) ** 2 + np.abs(self.t(part)) ** 2 for part in beta
        )

    def scalar_laplacian(self, values):
        r"""The analyst's Laplacian :math:`\partial_\tau^2 + \partial_t^2` of a function."""
        grid = self.grid
        return d_tau(d_tau(values, grid), grid) + d_t(d_t(values, grid), grid)


@dataclasses.dataclass(frozen=True)
class BundleGeometry:
    r"""Frame data of a map for the calculus on :math:`w^*\xi`.

    ``lie`` holds the frame matrices of :math:`\mathcal{L}_{X_\lambda}J` at the nodes and
    ``curvature`` the coefficient :math:`F` of the pulled-back curvature
    :math:`R^\pi(\partial_\tau, \partial_t) = F\,J`.
    """

    geometry: FieldGeometry
    differences: CovariantDifferences
    lie: np.ndarray
    curvature: np.ndarray

    @property
    def grid(self):
        return self.geometry.field.grid

    @property
    def dpi(self):
        r"""The one-form :math:`d^\pi w`."""
        return (to_complex(self.geometry.v_tau), to_complex(self.geometry.v_t))

    @property
    def zeta(self):
        r""":math:`\zeta = \pi\,\partial_\tau w`."""
        return to_complex(self.geometry.v_tau)

    @property
    def partial(self):
        r"""The one-form :math:`\partial^\pi w`, whose :math:`\partial_t` value is :math:`J` of its :math:`\partial_\tau` value."""
        value = to_complex(self.geometry.partial)
        return (value, 1j * value)

    def lie_apply(self, sigma):
        return apply_frame_matrix(self.lie, sigma)

    def curvature_term(self, beta):
        r"""The curvature term :math:`\sum_{i,j}\alpha^j\wedge(e_i\rfloor R(e_i, e_j)\beta)`."""
        beta_tau, beta_t = beta
        return (-1j * self.curvature * beta_t, 1j * self.curvature * beta_tau)


def bundle_geometry(w: MapField) -> BundleGeometry:
    """Connection, Lie derivative and curvature of the triad pulled back by ``w``."""
    triad, nodes = w.triad, w.nodes
    geometry = field_geometry(w)
    A_tau = connection_form(triad, nodes, geometry.w_tau)
    A_t = connection_form(triad, nodes, geometry.w_t)
    two_form = curvature_form(triad, nodes)
    curvature = np.einsum(
        "...i,...ij,...j->...",
        triad.frame_coordinates(nodes, geometry.w_tau),
        two_form,
        triad.frame_coordinates(nodes, geometry.w_t),
    )
    return BundleGeometry(
        geometry=geometry,
        differences=CovariantDifferences(w.grid, A_tau, A_t),
        lie=lie_derivative_matrix(triad, nodes),
        curvature=curvature,
    )


def random_form(grid: CylinderGrid, seed=0, modes=2, stream="random-form"):
    r"""A smooth complex one-form from low-frequency trigonometric coefficients.

    Each component is :math:`\sum c_{km}\cos(k\pi\tau/L)e^{2\pi imt}` over
    ``0 <= k <= modes`` and ``|m| <= modes`` with standard complex normal
    coefficients scaled by :math:`1/(1 + k + |m|)^2`. The coefficients only depend on
    ``seed``, so forms on refined grids sample the same function.
    """
    rng = utils.named_generator(seed, stream)
    tau, t = grid.mesh()
    parts = []
    for _ in range(2):
        part = np.zeros(grid.shape, dtype=complex)
        for k in range(modes + 1):
            for m in range(-modes, modes + 1):
                coefficient = complex(*rng.standard_normal(2)) / (1 + k + abs(m)) ** 2
                part += coefficient * np.cos(k * np.pi * tau / grid.L) * np.exp(
                    2j * np.pi * m * t
                )
        parts.append(part)
    return tuple(parts)
