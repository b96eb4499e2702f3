r"""Second-order difference operators and quadrature on cylinder grids.

Derivatives in :math:`\tau` are central in the interior and one-sided at both ends,
derivatives in :math:`t` are central and periodic. Quadrature is the trapezoid rule
in :math:`\tau` times the (periodic) midpoint rule in :math:`t`. Divergences of
edge values are compact and live on the interior nodes.
"""

import numpy as np
import scipy.sparse

from ._grid import CylinderGrid

__all__ = [
    "d_tau",
    "d_t",
    "curl",
    "quadrature_weights",
    "integrate",
    "circle_integral",
    "l2_norm",
    "tau_operator",
    "t_operator",
    "edge_pairs",
    "edge_divergence",
]


def d_tau(values, grid: CylinderGrid):
    r""":math:`\partial_\tau` along the first axis of ``values``."""
    return np.gradient(values, grid.htau, axis=0, edge_order=2)


def d_t(values, grid: CylinderGrid):
    r"""Periodic :math:`\partial_t` along the second axis of ``values``."""
    return (np.roll(values, -1, axis=1) - np.roll(values, 1, axis=1)) / (2.0 * grid.ht)


def curl(a_tau, a_t, grid: CylinderGrid):
    r"""Exterior derivative :math:`(\partial_\tau a_t - \partial_t a_\tau)\,d\tau\wedge dt`."""
    return d_tau(a_t, grid) - d_t(a_tau, grid)


def quadrature_weights(grid: CylinderGrid):
    """Weights of the area quadrature, shape ``(Ntau, Nt)``."""
    tau_weights = np.full(grid.Ntau, grid.htau)
    tau_weights[[0, -1]] *= 0.5
    return np.outer(tau_weights, np.full(grid.Nt, grid.ht))


def integrate(density, grid: CylinderGrid):
    r"""Integral of a nodal density over :math:`[0, L]\times S^1`."""
    return float(np.sum(quadrature_weights(grid) * density))


def circle_integral(values, grid: CylinderGrid):
    r"""Integrals over the circles :math:`\{\tau_i\}\times S^1`, one per slice."""
    return np.sum(values, axis=-1) * grid.ht


def l2_norm(density_squared, grid: CylinderGrid):
    """Discrete L2 norm from a pointwise squared norm."""
    return float(np.sqrt(max(integrate(density_squared, grid), 0.0)))


def _tau_matrix(grid):
    size, h = grid.Ntau, grid.htau
    rows, cols, vals = [], [], []
    for i in range(1, size - 1):
        rows += [i, i]
        cols += [i - 1, i + 1]
        vals += [-0.5 / h, 0.5 / h]
    for i, stencil in ((0, (0, 1, 2)), (size - 1, (size - 1, size - 2, size - 3))):
        sign = 1.0 if i == 0 else -1.0
        rows += [i, i, i]
        cols += list(stencil)
        vals += [sign * -1.5 / h, sign * 2.0 / h, sign * -0.5 / h]
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))


def _t_matrix(grid):
    size, h = grid.Nt, grid.ht
    index = np.arange(size)
    rows = np.concatenate([index, index])
    cols = np.concatenate([(index + 1) % size, (index - 1) % size])
    vals = np.concatenate([np.full(size, 0.5 / h), np.full(size, -0.5 / h)])
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))


def tau_operator(grid: CylinderGrid):
    r"""Sparse :math:`\partial_\tau` acting on nodal values flattened row-major."""
    return scipy.sparse.kron(_tau_matrix(grid), scipy.sparse.identity(grid.Nt), "csr")


def t_operator(grid: CylinderGrid):
    r"""Sparse periodic :math:`\partial_t` acting on nodal values flattened row-major."""
    return scipy.sparse.kron(scipy.sparse.identity(grid.Ntau), _t_matrix(grid), "csr")


def edge_pairs(grid: CylinderGrid):
    r"""Flat node indices of the :math:`\tau`-edges and the periodic :math:`t`-edges.

    Returns ``((left_tau, right_tau), (left_t, right_t))``; edge ``k`` of each family
    joins ``left[k]`` to ``right[k]``. There are ``(Ntau - 1) * Nt`` edges in
    :math:`\tau` and ``Ntau * Nt`` in :math:`t`, numbered like their left node.
    """
    index = np.arange(grid.size).reshape(grid.shape)
    tau_edges = (index[:-1].ravel(), index[1:].ravel())
    t_edges = (index.ravel(), np.roll(index, -1, axis=1).ravel())
    return tau_edges, t_edges


def edge_divergence(grid: CylinderGrid):
    r"""Sparse compact divergence from edge values to interior nodes.

    Maps ``(a_tau, a_t)`` on the edges of :func:`edge_pairs`, concatenated, to
    :math:`(a_{\tau,i+1/2} - a_{\tau,i-1/2})/h_\tau + (a_{t,j+1/2} - a_{t,j-1/2})/h_t`.
    Rows of the two boundary circles are zero.
    """
    interior = np.zeros(grid.shape)
    interior[1:-1] = 1.0
    mask = scipy.sparse.diags(interior.ravel())
    size, Nt = grid.size, grid.Nt
    tau_edges = (grid.Ntau - 1) * Nt
    nodes = np.arange(Nt, size - Nt)
    div_tau = scipy.sparse.csr_matrix(
        (
            np.concatenate([np.full(nodes.size, 1.0), np.full(nodes.size, -1.0)])
            / grid.htau,
            (np.concatenate([nodes, nodes]), np.concatenate([nodes, nodes - Nt])),
        ),
        shape=(size, tau_edges),
    )
    index = np.arange(size).reshape(grid.shape)
    previous = np.roll(index, 1, axis=1).ravel()
    div_t = scipy.sparse.csr_matrix(
        (
            np.concatenate([np.full(size, 1.0), np.full(size, -1.0)]) / grid.ht,
            (np.tile(index.ravel(), 2), np.concatenate([index.ravel(), previous])),
        ),
        shape=(size, size),
    )
    return scipy.sparse.hstack([div_tau, mask @ div_t], format="csr")
