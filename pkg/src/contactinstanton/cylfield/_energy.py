r"""Energies, the asymptotic invariants :math:`T, Q` and the identities relating them.

With :math:`w^*\lambda = a_\tau\,d\tau + a_t\,dt` and :math:`j\partial_\tau = \partial_t`,

* :math:`w^*\lambda\circ j = a_t\,d\tau - a_\tau\,dt`,
* :math:`d(w^*\lambda\circ j) = -(\partial_\tau a_\tau + \partial_t a_t)\,d\tau\wedge dt`,
  discretized in flux form on the interior nodes,
* :math:`Q = \int_{\{0\}\times S^1} w^*\lambda\circ j = -\int a_\tau(0, t)\,dt`,
* :math:`T = \frac12\int |d^\pi w|^2 + \int_{\{0\}\times S^1} w^*\lambda`.

The domain :math:`[0, L]\times S^1` is oriented by :math:`d\tau\wedge dt`.
"""

import dataclasses
from typing import Dict

import numpy as np
import scipy.integrate

from ._forms import field_geometry, staggered_pullback
from ._grid import MapField
from ._stencils import circle_integral, curl, edge_divergence, integrate, l2_norm

__all__ = [
    "EnergyReport",
    "EnergyIdentityReport",
    "SliceTable",
    "energies",
    "closedness_density",
    "check_energy_identities",
    "charge_action_slices",
]


@dataclasses.dataclass(frozen=True)
class EnergyReport:
    """Energy, action, charge and the residual norms of the instanton equations."""

    E_pi: float
    T: float
    Q: float
    res_dbar: float
    res_closed: float

    def as_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class EnergyIdentityReport:
    r"""Maximal nodal residuals of the pointwise energy identities.

    ``onshell_applicable`` records whether :math:`\bar\partial^\pi w` is small enough
    for the on-shell identity to be meaningful.
    """

    residuals: Dict[str, float]
    onshell_applicable: bool


@dataclasses.dataclass(frozen=True)
class SliceTable:
    r"""Circle integrals of :math:`w^*\lambda` and :math:`w^*\lambda\circ j` per slice.

    ``balance`` is :math:`\int_{\{s\}\times S^1} w^*\lambda + \frac12\int_{[s, L]\times S^1}|d^\pi w|^2`,
    which is independent of :math:`s` on instantons.
    """

    tau: np.ndarray
    action: np.ndarray
    charge: np.ndarray
    balance: np.ndarray

    def rows(self):
        return zip(self.tau, self.action, self.charge, self.balance)


def closedness_density(geometry):
    r"""Coefficient of :math:`d(w^*\lambda\circ j)` per node.

    The divergence is compact, taken of the edge values of
    :func:`~contactinstanton.cylfield.staggered_pullback`. The boundary circles carry
    the Dirichlet data and hold zero.
    """
    grid = geometry.field.grid
    edges = np.concatenate(staggered_pullback(geometry))
    return -(edge_divergence(grid) @ edges).reshape(grid.shape)


def energies(w: MapField) -> EnergyReport:
    r"""Energy :math:`E^\pi`, the invariants :math:`T, Q` and the two residual norms."""
    grid = w.grid
    geometry = field_geometry(w)
    energy = 0.5 * integrate(geometry.energy_density, grid)
    boundary_action = circle_integral(geometry.a_t[0], grid)
    charge = -circle_integral(geometry.a_tau[0], grid)
    return EnergyReport(
        E_pi=float(energy),
        T=float(energy + boundary_action),
        Q=float(charge),
        res_dbar=l2_norm(geometry.dbar_norm_squared, grid),
        res_closed=l2_norm(closedness_density(geometry) ** 2, grid),
    )


def check_energy_identities(w: MapField, onshell_threshold=1e-6) -> EnergyIdentityReport:
    r"""Nodal residuals of the identities of the energy density.

    * ``density_split``: :math:`e^\pi - |\partial^\pi w|^2 - |\bar\partial^\pi w|^2`,
    * ``two_form``: :math:`2\,d(w^*\lambda) - (|\partial^\pi w|^2 - |\bar\partial^\pi w|^2)`,
      with :math:`w^*d\lambda = d(w^*\lambda)` from the discrete curl,
    * ``lambda_wedge``: :math:`w^*\lambda\wedge(w^*\lambda\circ j) + |w^*\lambda|^2`,
    * ``onshell``: :math:`d(w^*\lambda) - \frac12|d^\pi w|^2`, valid when
      ``res_dbar <= onshell_threshold``.
    """
    grid = w.grid
    geometry = field_geometry(w)
    dbar_sq = geometry.dbar_norm_squared
    partial_sq = geometry.partial_norm_squared
    density = geometry.energy_density
    curl_lambda = curl(geometry.a_tau, geometry.a_t, grid)
    a_tau, a_t = geometry.a_tau, geometry.a_t
    composed = geometry.lambda_form.compose_j()
    wedge = a_tau * composed.a_t - a_t * composed.a_tau
    residuals = {
        "density_split": np.abs(density - partial_sq - dbar_sq),
        "two_form": np.abs(2.0 * curl_lambda - (partial_sq - dbar_sq)),
        "lambda_wedge": np.abs(wedge + geometry.lambda_form.norm_squared()),
        "onshell": np.abs(curl_lambda - 0.5 * density),
    }
    res_dbar = l2_norm(dbar_sq, grid)
    return EnergyIdentityReport(
        residuals={key: float(np.max(value)) for key, value in residuals.items()},
        onshell_applicable=bool(res_dbar <= onshell_threshold),
    )


def charge_action_slices(w: MapField) -> SliceTable:
    r"""Circle integrals of :math:`w^*\lambda` and :math:`w^*\lambda\circ j` on every slice."""
    grid = w.grid
    geometry = field_geometry(w)
    action = circle_integral(geometry.a_t, grid)
    charge = -circle_integral(geometry.a_tau, grid)
    slice_energy = circle_integral(geometry.energy_density, grid)
    head = scipy.integrate.cumulative_trapezoid(slice_energy, dx=grid.htau, initial=0.0)
    tail = head[-1] - head
    return SliceTable(
        tau=grid.tau,
        action=action,
        charge=charge,
        balance=action + 0.5 * tail,
    )
