r"""Pullbacks and the :math:`\pi`-parts of the derivative of a map.

Vectors of :math:`w^*\xi` are handled by their coordinates in the unitary frame
:math:`(e_1, e_2 = Je_1)`, where :math:`J` acts as :math:`J_0`. With
:math:`v_\tau = \pi\partial_\tau w` and :math:`v_t = \pi\partial_t w`,

.. math:: \bar\partial^\pi w(\partial_\tau) = \tfrac12(v_\tau + J_0 v_t),\qquad
          \partial^\pi w(\partial_\tau) = \tfrac12(v_\tau - J_0 v_t),

and the :math:`\partial_t` components follow from :math:`j\partial_\tau = \partial_t`.
"""

import dataclasses

import numpy as np

from ._grid import MapField, OneForm, XiSection
from ._stencils import d_t, d_tau, edge_pairs

__all__ = [
    "FieldGeometry",
    "field_geometry",
    "pullback_lambda",
    "dbar_pi",
    "partial_pi",
    "energy_density",
    "total_energy_density",
    "staggered_pullback",
]

_J0 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclasses.dataclass(frozen=True)
class FieldGeometry:
    """Derivatives of a map and the frame data of the triad at every node."""

    field: MapField
    w_tau: np.ndarray
    w_t: np.ndarray
    frame: np.ndarray
    coframe: np.ndarray
    lam: np.ndarray
    v_tau: np.ndarray
    v_t: np.ndarray
    a_tau: np.ndarray
    a_t: np.ndarray

    @property
    def dbar(self):
        r"""Frame coordinates of :math:`\bar\partial^\pi w(\partial_\tau)`."""
        return 0.5 * (self.v_tau + self.v_t @ _J0.T)

    @property
    def partial(self):
        r"""Frame coordinates of :math:`\partial^\pi w(\partial_\tau)`."""
        return 0.5 * (self.v_tau - self.v_t @ _J0.T)

    @property
    def energy_density(self):
        r""":math:`e^\pi = |d^\pi w|^2 = |v_\tau|^2 + |v_t|^2`."""
        return np.sum(self.v_tau ** 2, axis=-1) + np.sum(self.v_t ** 2, axis=-1)

    @property
    def dbar_norm_squared(self):
        r"""Pointwise :math:`|\bar\partial^\pi w|^2` as a one-form, twice the square of
        its :math:`\partial_\tau` component."""
        return 2.0 * np.sum(self.dbar ** 2, axis=-1)

    @property
    def partial_norm_squared(self):
        return 2.0 * np.sum(self.partial ** 2, axis=-1)

    @property
    def lambda_form(self):
        return OneForm(a_tau=self.a_tau, a_t=self.a_t)


def field_geometry(w: MapField) -> FieldGeometry:
    """Differentiate ``w`` and evaluate the triad frame at its nodes."""
    triad, grid, nodes = w.triad, w.grid, w.nodes
    w_tau = d_tau(nodes, grid)
    w_t = d_t(nodes, grid)
    lam = triad.lam(nodes)
    coframe = triad.xi_coframe(nodes)
    return FieldGeometry(
        field=w,
        w_tau=w_tau,
        w_t=w_t,
        frame=triad.unitary_frame(nodes),
        coframe=coframe,
        lam=lam,
        v_tau=np.einsum("...ij,...j->...i", coframe, w_tau),
        v_t=np.einsum("...ij,...j->...i", coframe, w_t),
        a_tau=np.einsum("...i,...i->...", lam, w_tau),
        a_t=np.einsum("...i,...i->...", lam, w_t),
    )


def pullback_lambda(w: MapField) -> OneForm:
    r"""The pullback :math:`w^*\lambda = a_\tau\,d\tau + a_t\,dt`."""
    nodes = w.nodes
    lam = w.triad.lam(nodes)
    return OneForm(
        a_tau=np.einsum("...i,...i->...", lam, d_tau(nodes, w.grid)),
        a_t=np.einsum("...i,...i->...", lam, d_t(nodes, w.grid)),
    )


def dbar_pi(w: MapField) -> XiSection:
    r"""The :math:`(0,1)`-part :math:`\bar\partial^\pi w`, as its value on :math:`\partial_\tau`.

    The value on :math:`\partial_t` is :math:`-J` of the returned section, so the
    pointwise norm of the one-form is twice that of the section.
    """
    geometry = field_geometry(w)
    return XiSection(base=w, vecs=np.einsum("...ij,...j->...i", geometry.frame, geometry.dbar))


def partial_pi(w: MapField) -> XiSection:
    r"""The :math:`(1,0)`-part :math:`\partial^\pi w`, as its value on :math:`\partial_\tau`."""
    geometry = field_geometry(w)
    return XiSection(
        base=w, vecs=np.einsum("...ij,...j->...i", geometry.frame, geometry.partial)
    )


def energy_density(w: MapField):
    r"""The :math:`\pi`-energy density :math:`e^\pi = |d^\pi w|^2` per node."""
    return field_geometry(w).energy_density


def total_energy_density(w: MapField):
    r"""The density :math:`|d^\pi w|^2 + |w^*\lambda|^2 = |dw|^2` per node."""
    geometry = field_geometry(w)
    return geometry.energy_density + geometry.lambda_form.norm_squared()


def staggered_pullback(geometry: FieldGeometry):
    r"""Edge values of :math:`w^*\lambda` for the compact divergence.

    On the edge from node :math:`k` to node :math:`l` of width :math:`h` the value is
    :math:`\frac12(\lambda_k + \lambda_l)\cdot(w_l - w_k)/h`. Returns the
    :math:`\tau`-edge and :math:`t`-edge values as flat arrays ordered like
    :func:`~contactinstanton.cylfield.edge_pairs`.
    """
    grid = geometry.field.grid
    nodes = geometry.field.nodes.reshape(grid.size, -1)
    lam = geometry.lam.reshape(grid.size, -1)
    values = []
    for (left, right), h in zip(edge_pairs(grid), (grid.htau, grid.ht)):
        mean = 0.5 * (lam[left] + lam[right])
        values.append(np.einsum("ei,ei->e", mean, nodes[right] - nodes[left]) / h)
    return tuple(values)
