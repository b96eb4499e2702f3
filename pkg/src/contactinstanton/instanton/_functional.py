r"""Least-squares merit function of the contact instanton equations.

The residual vector stacks :math:`\sqrt{2W}\,\bar\partial^\pi w(\partial_\tau)` in frame
coordinates and :math:`\sqrt{W}\,d(w^*\lambda\circ j)`, with quadrature weights
:math:`W`, so that

.. math:: F(w) = \tfrac12|R|^2
          = \tfrac12\|\bar\partial^\pi w\|^2_{L^2} + \tfrac12\|d(w^*\lambda\circ j)\|^2_{L^2}.

The Jacobian differentiates the difference stencils exactly. The coefficient fields
of the triad (coframe and contact form) are differentiated pointwise along the frame
:math:`(e_1, e_2, X_\lambda)` by central differences, and variations of a node are
parametrized by their coordinates in that frame, which keeps them tangent to the triad.
"""

import dataclasses

import numpy as np
import scipy.sparse

from contactinstanton import config
from contactinstanton.cylfield import (
    MapField,
    closedness_density,
    edge_divergence,
    edge_pairs,
    field_geometry,
    integrate,
    quadrature_weights,
    t_operator,
    tau_operator,
)

__all__ = ["Linearization", "functional", "gradient", "linearize", "residual_vector"]

_J0 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclasses.dataclass(frozen=True)
class Linearization:
    """Residual vector and sparse Jacobian of the merit function at a field.

    Columns of ``jacobian`` are indexed by ``3 * k + m`` for node ``k`` (row-major)
    and frame direction ``m``; ``frames`` holds the frame columns at every node.
    """

    field: MapField
    residual: np.ndarray
    jacobian: scipy.sparse.csr_matrix
    frames: np.ndarray
    res_dbar: float
    res_closed: float
    derivative_scale: float

    @property
    def value(self):
        return 0.5 * float(np.sum(self.residual ** 2))

    def frame_gradient(self):
        """Derivatives of ``F`` along the frame directions at every node."""
        return self.jacobian.T @ self.residual


def _weights(grid):
    weights = quadrature_weights(grid)
    return np.sqrt(2.0 * weights), np.sqrt(weights)


def _split_residual(geometry):
    dbar_weights, closed_weights = _weights(geometry.field.grid)
    dbar = dbar_weights[..., None] * geometry.dbar
    closed = closed_weights * closedness_density(geometry)
    return dbar, closed


def residual_vector(w: MapField):
    """The residual ``R`` with ``F = |R|**2 / 2``."""
    dbar, closed = _split_residual(field_geometry(w))
    return np.concatenate([dbar.ravel(), closed.ravel()])


def functional(w: MapField) -> float:
    r"""The merit function :math:`F(w)`.

    Vanishes exactly iff both discrete residuals vanish. Sums are pairwise in a fixed
    order, so the value is reproducible.
    """
    return 0.5 * float(np.sum(residual_vector(w) ** 2))


def _block_diagonal(blocks):
    """Sparse block diagonal matrix from blocks of shape ``(..., r, c)``, one per node."""
    rows, cols = blocks.shape[-2:]
    data = np.ascontiguousarray(blocks.reshape(-1, rows, cols))
    count = data.shape[0]
    return scipy.sparse.bsr_matrix(
        (data, np.arange(count), np.arange(count + 1)),
        shape=(count * rows, count * cols),
    )


def _frame_derivatives(triad, nodes, frames, step):
    """Central differences of the coframe and the contact form along the frame."""
    offsets = step * np.swapaxes(frames, -1, -2)
    plus = nodes[..., None, :] + offsets
    minus = nodes[..., None, :] - offsets
    d_coframe = (triad.xi_coframe(plus) - triad.xi_coframe(minus)) / (2.0 * step)
    d_lam = (triad.lam(plus) - triad.lam(minus)) / (2.0 * step)
    return d_coframe, d_lam


def _edge_jacobian(nodes, lam, d_lam, frames, left, right, h):
    """Jacobian of the edge values of the pullback with respect to frame coordinates."""
    delta = (nodes[right] - nodes[left]) / h
    mean = 0.5 * (lam[left] + lam[right])
    count = left.size
    data, cols = [], []
    for ends, sign in ((left, -1.0), (right, 1.0)):
        coefficients = 0.5 * np.einsum("emi,ei->em", d_lam[ends], delta)
        coefficients += sign / h * np.einsum("ei,eim->em", mean, frames[ends])
        data.append(coefficients.ravel())
        cols.append((3 * ends[:, None] + np.arange(3)).ravel())
    rows = np.tile(np.repeat(np.arange(count), 3), 2)
    return scipy.sparse.csr_matrix(
        (np.concatenate(data), (rows, np.concatenate(cols))),
        shape=(count, 3 * nodes.shape[0]),
    )


def linearize(w: MapField, fd_step=None) -> Linearization:
    """Residual and Jacobian of the merit function at ``w``.

    ``fd_step`` is the step of the pointwise differences of the triad coefficients and
    defaults to ``config.FINITE_DIFFERENCES["pointwise"]``.
    """
    step = config.FINITE_DIFFERENCES["pointwise"] if fd_step is None else fd_step
    triad, grid, nodes = w.triad, w.grid, w.nodes
    geometry = field_geometry(w)
    identity = scipy.sparse.identity(triad.dim, format="csr")
    frames = triad.full_frame(nodes)
    embed = _block_diagonal(frames)
    tau_w = scipy.sparse.kron(tau_operator(grid), identity, "csr") @ embed
    t_w = scipy.sparse.kron(t_operator(grid), identity, "csr") @ embed

    coframe = geometry.coframe
    rotated = np.einsum("ab,...bi->...ai", _J0, coframe)
    d_coframe, d_lam = _frame_derivatives(triad, nodes, frames, step)

    pointwise_dbar = np.einsum("...mai,...i->...am", d_coframe, geometry.w_tau)
    pointwise_dbar += np.einsum(
        "ab,...mbi,...i->...am", _J0, d_coframe, geometry.w_t
    )
    jac_dbar = 0.5 * (
        _block_diagonal(coframe) @ tau_w
        + _block_diagonal(rotated) @ t_w
        + _block_diagonal(pointwise_dbar)
    )
    flat_nodes = nodes.reshape(grid.size, -1)
    flat_lam = geometry.lam.reshape(grid.size, -1)
    flat_d_lam = d_lam.reshape((grid.size,) + d_lam.shape[-2:])
    flat_frames = frames.reshape((grid.size,) + frames.shape[-2:])
    jac_edges = scipy.sparse.vstack(
        [
            _edge_jacobian(flat_nodes, flat_lam, flat_d_lam, flat_frames, left, right, h)
            for (left, right), h in zip(edge_pairs(grid), (grid.htau, grid.ht))
        ],
        format="csr",
    )
    jac_closed = -(edge_divergence(grid) @ jac_edges)

    dbar_weights, closed_weights = _weights(grid)
    jacobian = scipy.sparse.vstack(
        [
            scipy.sparse.diags(np.repeat(dbar_weights.ravel(), 2)) @ jac_dbar,
            scipy.sparse.diags(closed_weights.ravel()) @ jac_closed,
        ],
        format="csr",
    )
    dbar, closed = _split_residual(geometry)
    derivative_density = np.sum(geometry.w_tau ** 2 + geometry.w_t ** 2, axis=-1)
    return Linearization(
        field=w,
        residual=np.concatenate([dbar.ravel(), closed.ravel()]),
        jacobian=jacobian,
        frames=frames,
        res_dbar=float(np.sqrt(np.sum(dbar ** 2))),
        res_closed=float(np.sqrt(np.sum(closed ** 2))),
        derivative_scale=integrate(derivative_density, grid),
    )


def gradient(w: MapField, fd_step=None):
    """Gradient of :func:`functional` with respect to the node positions.

    Returned as ambient vectors of shape ``(Ntau, Nt, n)``. On constrained triads the
    gradient is the Euclidean one projected to the tangent spaces of the triad.
    """
    lin = linearize(w, fd_step)
    frames = lin.frames
    coefficients = lin.frame_gradient().reshape(w.grid.shape + (3,))
    gram = np.swapaxes(frames, -1, -2) @ frames
    dual = np.linalg.solve(gram, coefficients[..., None])[..., 0]
    return np.einsum("...im,...m->...i", frames, dual)
