r"""Exact and approximate instantons used as oracles, initial guesses and test data."""

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from contactinstanton import errors, utils
from contactinstanton.cylfield import CylinderGrid, MapField, d_t, d_tau, l2_norm
from contactinstanton.reeb import ClosedOrbit, flow_points
from contactinstanton.triad import FlatContactTriad

__all__ = [
    "oracle_flat",
    "trivial_cylinder",
    "massless_instanton",
    "initial_guess",
    "perturb_interior",
]

_ROUNDOFF = 1e-12


def massless_instanton(orbit: ClosedOrbit, grid: CylinderGrid, charge=0.0) -> MapField:
    r"""The massless instanton :math:`w(\tau, t) = \gamma(-Q\tau + Tt)` over ``orbit``."""
    tau, t = grid.mesh()
    times = -charge * tau + orbit.period * t
    starts = np.broadcast_to(orbit.p.coords, grid.shape + (orbit.triad.dim,))
    return MapField(grid, flow_points(orbit.triad, starts, times), orbit.triad)


def trivial_cylinder(orbit: ClosedOrbit, grid: CylinderGrid) -> MapField:
    r"""The trivial cylinder :math:`w(\tau, t) = \gamma(Tt)`."""
    return massless_instanton(orbit, grid, charge=0.0)


def initial_guess(grid: CylinderGrid, triad, loop_start, loop_end) -> MapField:
    """Linear interpolation between two boundary loops, projected onto the triad."""
    loop_start = np.asarray(loop_start, dtype=float)
    loop_end = np.asarray(loop_end, dtype=float)
    expected = (grid.Nt, triad.dim)
    if loop_start.shape != expected or loop_end.shape != expected:
        raise ValueError(f"Boundary loops need shape {expected}.")
    fraction = (grid.tau / grid.L)[:, None, None]
    nodes = triad.project((1.0 - fraction) * loop_start + fraction * loop_end)
    nodes[0], nodes[-1] = loop_start, loop_end
    return MapField(grid, nodes, triad)


def perturb_interior(w: MapField, amplitude, seed=0) -> MapField:
    """Add a smooth random tangent displacement of sup norm ``amplitude`` to interior nodes.

    The displacement combines the lowest modes in both directions and vanishes at the
    boundary rows, which stay unchanged.
    """
    if amplitude < 0:
        raise ValueError("The amplitude cannot be negative.")
    grid, triad = w.grid, w.triad
    rng = utils.named_generator(seed, "perturb-interior")
    tau, t = grid.mesh()
    displacement = np.zeros(grid.shape + (triad.dim,))
    for k in (1, 2, 3):
        envelope = np.sin(k * np.pi * tau / grid.L)[..., None]
        for m in (0, 1, 2):
            cos_part, sin_part = rng.standard_normal((2, triad.dim))
            wave = np.cos(2 * np.pi * m * t)[..., None] * cos_part
            wave += np.sin(2 * np.pi * m * t)[..., None] * sin_part
            displacement += envelope * wave
    displacement = np.einsum("...ij,...j->...i", triad.tangent_projector(w.nodes), displacement)
    displacement[[0, -1]] = 0.0
    size = np.max(np.linalg.norm(displacement, axis=-1))
    if amplitude == 0 or size == 0:
        return w
    nodes = triad.project(w.nodes + amplitude / size * displacement)
    nodes[[0, -1]] = w.nodes[[0, -1]]
    return w.with_nodes(nodes)


def _boundary_values(z0, grid):
    if isinstance(z0, tuple):
        if len(z0) != 2:
            raise ValueError("Boundary data pairs hold the loops at both ends.")
        start, end = z0
    else:
        start = end = z0
    return (np.broadcast_to(np.asarray(value, dtype=float), (grid.Nt,)) for value in (start, end))


def _second_difference(size, h, periodic):
    main = np.full(size, -2.0)
    off = np.ones(size - 1)
    matrix = scipy.sparse.diags([off, main, off], [-1, 0, 1], format="lil")
    if periodic:
        matrix[0, size - 1] = 1.0
        matrix[size - 1, 0] = 1.0
    return matrix.tocsr() / h ** 2


def _flux_divergence(x, y, grid):
    r"""Compact :math:`\partial_\tau(y\,x_\tau) + \partial_t(y\,x_t)` on interior nodes."""
    flux_tau = 0.5 * (y[1:] + y[:-1]) * (x[1:] - x[:-1]) / grid.htau
    div_tau = (flux_tau[1:] - flux_tau[:-1]) / grid.htau
    y_next, x_next = np.roll(y, -1, axis=1), np.roll(x, -1, axis=1)
    flux_t = 0.5 * (y_next + y) * (x_next - x) / grid.ht
    div_t = (flux_t - np.roll(flux_t, 1, axis=1)) / grid.ht
    return div_tau + div_t[1:-1]


def _cauchy_riemann_check(f, grid, tolerance):
    f_tau, f_t = d_tau(f, grid), d_t(f, grid)
    residual = l2_norm(np.abs(f_tau + 1j * f_t) ** 2, grid)
    scale = l2_norm(np.abs(f_tau) ** 2 + np.abs(f_t) ** 2, grid)
    if residual > tolerance * scale + _ROUNDOFF * (1.0 + np.max(np.abs(f))):
        raise errors.PreconditionError(
            f"The data is not holomorphic: CR residual {residual:.3e} "
            f"against derivative norm {scale:.3e}.",
            residual=residual,
        )


def oracle_flat(grid: CylinderGrid, f, z0=0.0, tolerance=0.1) -> MapField:
    r"""An instanton of the flat model from holomorphic data :math:`x + iy = f(\tau + it)`.

    ``f`` is a complex array of shape ``(Ntau, Nt)`` or a callable ``f(tau, t)``. The
    height :math:`z` solves the compact discretization of
    :math:`\Delta z = \mathrm{div}(y\nabla x)`, which is
    :math:`d(w^*\lambda\circ j) = 0` for :math:`w^*\lambda = dz - y\,dx`, periodic in
    :math:`t` with Dirichlet data ``z0`` at both ends: a scalar, an array of shape
    ``(Nt,)``, or a pair ``(z_start, z_end)`` of either.

    Raises
    ------
    PreconditionError
        If the discrete Cauchy-Riemann residual of ``f`` exceeds ``tolerance`` times the
        norm of its derivative, plus a roundoff floor relative to the size of ``f``.
    """
    if callable(f):
        f = f(*grid.mesh())
    f = np.broadcast_to(np.asarray(f, dtype=complex), grid.shape)
    _cauchy_riemann_check(f, grid, tolerance)
    x, y = f.real, f.imag
    z_start, z_end = _boundary_values(z0, grid)

    inner = grid.Ntau - 2
    laplacian = scipy.sparse.kron(
        _second_difference(inner, grid.htau, periodic=False),
        scipy.sparse.identity(grid.Nt),
    ) + scipy.sparse.kron(
        scipy.sparse.identity(inner), _second_difference(grid.Nt, grid.ht, periodic=True)
    )
    rhs = _flux_divergence(x, y, grid)
    rhs[0] -= z_start / grid.htau ** 2
    rhs[-1] -= z_end / grid.htau ** 2
    z_inner = scipy.sparse.linalg.spsolve(laplacian.tocsc(), rhs.ravel())
    z = np.vstack([z_start, z_inner.reshape(inner, grid.Nt), z_end])
    return MapField(grid, np.stack([x, y, z], axis=-1), FlatContactTriad())
