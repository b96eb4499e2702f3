r"""Reconstruction of the symplectization coordinate :math:`a` with :math:`da = w^*\lambda\circ j`.

With :math:`w^*\lambda\circ j = a_t\,d\tau - a_\tau\,dt` the function is integrated from
the origin node, first along the circle :math:`\{0\}\times S^1` and then in :math:`\tau`.
"""

import dataclasses

import numpy as np
import scipy.integrate

from contactinstanton import config, errors
from contactinstanton.cylfield import MapField, circle_integral, field_geometry

__all__ = ["SymplectizationReport", "reconstruct_a"]


@dataclasses.dataclass(frozen=True)
class SymplectizationReport:
    r"""The function :math:`a`, its normalization and the closedness of the integrated form.

    ``deviation`` holds :math:`\max_t|a - T\tau - C_0|` per slice, ``loop_residual``
    the largest circle integral of :math:`w^*\lambda\circ j` and ``cell_residual`` the
    :math:`L^2` density of its integrals around grid cells.
    """

    a: np.ndarray
    T: float
    b: np.ndarray
    alpha: np.ndarray
    C0: float
    deviation: np.ndarray
    loop_residual: float
    cell_residual: float


def _cell_loops(a_tau, a_t, grid):
    """Trapezoid integrals of the composed form around every grid cell."""
    form_tau, form_t = a_t, -a_tau
    bottom = 0.5 * grid.htau * (form_tau[:-1] + form_tau[1:])
    side = 0.5 * grid.ht * (form_t + np.roll(form_t, -1, axis=1))
    return bottom - np.roll(bottom, -1, axis=1) + side[1:] - side[:-1]


def reconstruct_a(w: MapField, T=None) -> SymplectizationReport:
    """Integrate ``da = w*lambda o j`` and compare ``a`` with ``T tau + C0``.

    ``T`` defaults to the action of the last slice, ``C0`` is the circle average of
    ``a - T tau`` on the last slice.

    Raises
    ------
    NotExactError
        If the charge on some slice exceeds ``config.ANALYSIS["charge_threshold"]``.
    """
    grid = w.grid
    geometry = field_geometry(w)
    a_tau, a_t = geometry.a_tau, geometry.a_t
    charge = -circle_integral(a_tau, grid)
    loop_residual = float(np.max(np.abs(charge)))
    if loop_residual > config.ANALYSIS["charge_threshold"]:
        raise errors.NotExactError(
            f"The composed form has period {loop_residual:.3e} around the circle."
        )
    circle = np.append(-a_tau[0], -a_tau[0, 0])
    t_closed = np.append(grid.t, 1.0)
    start = scipy.integrate.cumulative_trapezoid(circle, t_closed, initial=0.0)[:-1]
    a = start + scipy.integrate.cumulative_trapezoid(a_t, grid.tau, axis=0, initial=0.0)

    T = float(circle_integral(a_t[-1], grid)) if T is None else float(T)
    b = a - T * grid.tau[:, None]
    alpha = circle_integral(b, grid)
    C0 = float(alpha[-1])
    cells = _cell_loops(a_tau, a_t, grid) / (grid.htau * grid.ht)
    cell_residual = float(np.sqrt(np.sum(cells ** 2) * grid.htau * grid.ht))
    return SymplectizationReport(
        a=a,
        T=T,
        b=b,
        alpha=alpha,
        C0=C0,
        deviation=np.max(np.abs(b - C0), axis=1),
        loop_residual=loop_residual,
        cell_residual=cell_residual,
    )
