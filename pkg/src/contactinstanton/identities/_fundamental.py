r"""The fundamental equation of contact Cauchy-Riemann maps and its two-form version.

For any smooth map,

.. math:: d^{\nabla^\pi}(d^\pi w)(\partial_\tau, \partial_t)
          = \pi T(\partial_\tau w, \partial_t w)
          - \tfrac12 a_t(\mathcal{L}_{X_\lambda}J)J\,\pi\partial_\tau w
          + \tfrac12 a_\tau(\mathcal{L}_{X_\lambda}J)J\,\pi\partial_t w

with :math:`a = w^*\lambda`. On-shell the torsion term is the vanishing
:math:`(1,1)`-part and the equation becomes first order in :math:`\zeta = \pi\partial_\tau w`.
"""

import logging

import numpy as np

from contactinstanton import config
from contactinstanton.cylfield import MapField, l2_norm
from contactinstanton.triad import torsion

from ._bundle import bundle_geometry, interior, to_complex
from ._report import IdentityReport, as_field_list, identity_report, relative_residual

__all__ = [
    "on_shell",
    "fundamental_equation_residual",
    "two_form_equation_residual",
]

logger = logging.getLogger(__name__)


def on_shell(w: MapField, geometry=None):
    r"""Whether :math:`\|\bar\partial^\pi w\|` is of the size of the discretization error.

    The threshold is :math:`(2\pi h_t)^2` relative to :math:`\|d^\pi w\|`.
    """
    geometry = geometry if geometry is not None else bundle_geometry(w).geometry
    grid = w.grid
    dbar = l2_norm(geometry.dbar_norm_squared, grid)
    if dbar <= config.ANALYSIS["residual_floor"]:
        return True
    return dbar <= (2.0 * np.pi * grid.ht) ** 2 * l2_norm(geometry.energy_density, grid)


def precondition_details(fields):
    details = []
    for w in fields:
        if not on_shell(w):
            details.append(f"Nt={w.grid.Nt}: field is not on-shell, the identity is not asserted")
            logger.warning("Identity evaluated off-shell at Nt=%d", w.grid.Nt)
    return details


def _fundamental_residual(w: MapField):
    bundle = bundle_geometry(w)
    geometry, differences = bundle.geometry, bundle.differences
    zeta = bundle.zeta
    nabla_tau = differences.tau(zeta)
    nabla_t = differences.t(zeta)
    zero_order = -0.5 * geometry.a_t * bundle.lie_apply(zeta) + 0.5 * geometry.a_tau * (
        bundle.lie_apply(1j * zeta)
    )
    residual = nabla_tau + 1j * nabla_t + zero_order
    scale = np.abs(nabla_tau) + np.abs(nabla_t) + np.abs(zero_order)
    return relative_residual(residual, scale)


def fundamental_equation_residual(fields) -> IdentityReport:
    r"""Residual of :math:`\nabla^\pi_\tau\zeta + J\nabla^\pi_t\zeta
    - \frac12 a_t(\mathcal{L}_{X_\lambda}J)\zeta + \frac12 a_\tau(\mathcal{L}_{X_\lambda}J)J\zeta`.

    ``fields`` is a map field or a sequence of them at increasing resolution; the
    expected order is two. Off-shell fields get a warning in the report details.
    """
    fields = as_field_list(fields)
    return identity_report(
        "fundamental_equation",
        [w.grid for w in fields],
        [_fundamental_residual(w) for w in fields],
        details=precondition_details(fields),
    )


def _xi_coordinates(triad, nodes, vectors):
    return to_complex(np.einsum("...ij,...j->...i", triad.xi_coframe(nodes), vectors))


def _two_form_residual(w: MapField):
    triad, nodes = w.triad, w.nodes
    bundle = bundle_geometry(w)
    geometry, differences = bundle.geometry, bundle.differences
    v_tau, v_t = bundle.dpi
    lhs = differences.tau(v_t) - differences.t(v_tau)
    torsion_term = _xi_coordinates(
        triad, nodes, torsion(triad, nodes, geometry.w_tau, geometry.w_t)
    )
    wedge_term = -0.5 * geometry.a_t * bundle.lie_apply(1j * v_tau) + 0.5 * (
        geometry.a_tau * bundle.lie_apply(1j * v_t)
    )
    residual = lhs - torsion_term - wedge_term
    scale = np.abs(lhs) + np.abs(torsion_term) + np.abs(wedge_term)

    frame = geometry.frame
    partial = np.einsum("...ij,...j->...i", frame, geometry.partial)
    j_partial = np.einsum("...ij,...j->...i", frame, geometry.partial[..., ::-1] * [-1.0, 1.0])
    mixed = _xi_coordinates(triad, nodes, torsion(triad, nodes, partial, j_partial))
    return relative_residual(residual, scale), float(np.max(interior(np.abs(mixed))))


def two_form_equation_residual(fields) -> IdentityReport:
    r"""Residual of the formula for :math:`d^{\nabla^\pi}(d^\pi w)`, valid for any map.

    The details record the size of the :math:`(1,1)`-part
    :math:`T^\pi(\partial^\pi w, \partial^\pi w)`, which vanishes identically.
    """
    fields = as_field_list(fields)
    results = [_two_form_residual(w) for w in fields]
    details = [f"Nt={w.grid.Nt}: (1,1) torsion {mixed:.3e}" for w, (_, mixed) in zip(fields, results)]
    return identity_report(
        "two_form_equation",
        [w.grid for w in fields],
        [residual for residual, _ in results],
        details=details,
    )
