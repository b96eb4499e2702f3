r"""The a priori density inequality and the coercive estimates of instantons.

All constants come from :math:`C^0` norms of :math:`\mathcal{L}_{X_\lambda}J`, of its
covariant derivative and of the curvature of :math:`\nabla^\pi`. Global suprema over
the contact manifold are out of reach, so the norms are sampled over the image of the
map and enlarged by ``config.ANALYSIS["norm_safety"]``. The domain is the flat
cylinder, :math:`K = 0`. Laplacians of functions are the positive ones,
:math:`\Delta = -(\partial_\tau^2 + \partial_t^2)`.
"""

import dataclasses
import logging

import numpy as np

from contactinstanton import config
from contactinstanton.cylfield import (
    MapField,
    d_t,
    d_tau,
    field_geometry,
    quadrature_weights,
    total_energy_density,
)
from contactinstanton.triad import (
    christoffel_symbols,
    covariant_derivative_lie_J,
    curvature_form,
    lie_derivative_matrix,
)
from contactinstanton.type import DomainInterval

from ._bundle import CovariantDifferences, interior
from ._report import IdentityReport, as_field_list, inequality_report

__all__ = [
    "TensorBounds",
    "tensor_bounds",
    "nabla_dw_squared",
    "raised_cosine_cutoff",
    "apriori_density_check",
    "pointwise_coercive_check",
    "coercive_estimate_check",
]

logger = logging.getLogger(__name__)

_SAMPLED = "tensor norms sampled over the image with safety factor {:g}"


@dataclasses.dataclass(frozen=True)
class TensorBounds:
    r"""Sampled sup-norms of :math:`\mathcal{L}_{X_\lambda}J`,
    :math:`\nabla^\pi(\mathcal{L}_{X_\lambda}J)` and :math:`\mathrm{Ric}`, safety included."""

    lie: float
    nabla_lie: float
    ricci: float

    @property
    def apriori_constant(self):
        return 2.0 * self.lie ** 2 + self.nabla_lie + self.ricci + 1.0

    @property
    def coercive_constant(self):
        return 9.0 * self.lie ** 2 + 4.0 * self.nabla_lie + 4.0 * self.ricci + 4.0


def tensor_bounds(w: MapField) -> TensorBounds:
    """Sample the tensor norms at the nodes of ``w``."""
    triad = w.triad
    nodes = w.nodes.reshape(-1, w.nodes.shape[-1])
    safety = config.ANALYSIS["norm_safety"]
    lie = np.linalg.norm(lie_derivative_matrix(triad, nodes), ord=2, axis=(-2, -1))
    frame = triad.full_frame(nodes)
    nabla_lie = np.sqrt(
        sum(
            np.sum(covariant_derivative_lie_J(triad, nodes, frame[..., i]) ** 2, axis=(-2, -1))
            for i in range(3)
        )
    )
    ricci = np.linalg.norm(curvature_form(triad, nodes), ord=2, axis=(-2, -1))
    bounds = TensorBounds(
        lie=safety * float(np.max(lie)),
        nabla_lie=safety * float(np.max(nabla_lie)),
        ricci=safety * float(np.max(ricci)),
    )
    logger.debug("Sampled tensor bounds %s", bounds)
    return bounds


def nabla_dw_squared(w: MapField):
    r"""Pointwise :math:`|\nabla(dw)|^2` with the triad connection on :math:`w^*TM`."""
    triad, grid, nodes = w.triad, w.grid, w.nodes
    geometry = field_geometry(w)
    gamma = christoffel_symbols(triad, nodes)
    directions = (geometry.w_tau, geometry.w_t)
    coordinates = [triad.frame_coordinates(nodes, v) for v in directions]
    total = np.zeros(grid.shape)
    for along, difference in zip(coordinates, (d_tau, d_t)):
        for coords in coordinates:
            derivative = difference(coords, grid) + np.einsum(
                "...i,...j,...ijk->...k", along, coords, gamma
            )
            total += np.sum(derivative ** 2, axis=-1)
    return total


def _positive_ratio(lhs, rhs):
    floor = config.ANALYSIS["residual_floor"]
    return float(np.max(interior(lhs / np.maximum(rhs, floor))))


def apriori_density_check(fields) -> IdentityReport:
    r"""Nodewise :math:`\Delta e \leq C e^2 + \|K\| e` for :math:`e = |dw|^2` with
    :math:`C = 2\|\mathcal{L}_{X_\lambda}J\|^2 + \|\nabla^\pi(\mathcal{L}_{X_\lambda}J)\|
    + \|\mathrm{Ric}\| + 1`."""
    fields = as_field_list(fields)
    ratios, slack = [], []
    for w in fields:
        constant = tensor_bounds(w).apriori_constant
        energy = total_energy_density(w)
        lhs = -CovariantDifferences(w.grid).scalar_laplacian(energy)
        rhs = constant * energy ** 2
        ratios.append(_positive_ratio(lhs, rhs))
        slack.append(float(np.min(interior(rhs - lhs))))
    return inequality_report(
        "apriori_density",
        [w.grid for w in fields],
        ratios,
        slack,
        details=[_SAMPLED.format(config.ANALYSIS["norm_safety"])],
    )


def pointwise_coercive_check(fields) -> IdentityReport:
    r"""Nodewise :math:`|\nabla(dw)|^2 \leq C_1|dw|^4 - 4K|dw|^2 - 2\Delta e` with
    :math:`C_1 = 9\|\mathcal{L}_{X_\lambda}J\|^2 + 4\|\nabla^\pi(\mathcal{L}_{X_\lambda}J)\|
    + 4\|\mathrm{Ric}\| + 4`."""
    fields = as_field_list(fields)
    ratios, slack = [], []
    for w in fields:
        constant = tensor_bounds(w).coercive_constant
        energy = total_energy_density(w)
        lhs = nabla_dw_squared(w)
        rhs = constant * energy ** 2 + 2.0 * CovariantDifferences(w.grid).scalar_laplacian(energy)
        ratios.append(_positive_ratio(lhs, rhs))
        slack.append(float(np.min(interior(rhs - lhs))))
    return inequality_report(
        "pointwise_coercive",
        [w.grid for w in fields],
        ratios,
        slack,
        details=[_SAMPLED.format(config.ANALYSIS["norm_safety"])],
    )


def _check_nesting(L, inner: DomainInterval, outer: DomainInterval):
    start, end = inner
    outer_start, outer_end = outer
    if not 0.0 <= outer_start < start <= end < outer_end <= L:
        raise ValueError(
            f"Domains {inner} and {outer} are not nested strictly inside [0, {L}]."
        )


def raised_cosine_cutoff(tau, inner: DomainInterval, outer: DomainInterval):
    r"""Cutoff equal to one on ``inner`` with raised-cosine ramps down to zero at the ends
    of ``outer``, and the sup-norm :math:`\pi/(2\min\text{gap})` of its derivative."""
    start, end = inner
    outer_start, outer_end = outer
    left, right = start - outer_start, outer_end - end
    tau = np.asarray(tau, dtype=float)
    chi = np.ones_like(tau)
    rising = tau < start
    chi[rising] = 0.5 * (1.0 - np.cos(np.pi * np.clip(tau[rising] - outer_start, 0.0, None) / left))
    falling = tau > end
    chi[falling] = 0.5 * (1.0 - np.cos(np.pi * np.clip(outer_end - tau[falling], 0.0, None) / right))
    return chi, np.pi / (2.0 * min(left, right))


def coercive_estimate_check(fields, D1: DomainInterval, D2: DomainInterval) -> IdentityReport:
    r"""Local coercive estimate

    .. math:: \|\nabla(dw)\|^2_{L^2(D_1)} \leq (8\|K\| + 16\|d\chi\|^2)\|dw\|^2_{L^2(D_2)}
              + 2C_1\|dw\|^4_{L^4(D_2)}

    for the cylinder pieces :math:`D_i = [a_i, b_i]\times S^1` and the raised-cosine
    cutoff :math:`\chi` of :func:`raised_cosine_cutoff`.

    Raises
    ------
    ValueError
        If :math:`D_1` does not lie in the interior of :math:`D_2` or :math:`D_2`
        leaves the cylinder.
    """
    fields = as_field_list(fields)
    for w in fields:
        _check_nesting(w.grid.L, D1, D2)
    ratios, slack, details = [], [], []
    for w in fields:
        grid = w.grid
        weights = quadrature_weights(grid)
        tau = grid.tau[:, None]
        on_inner = (tau >= D1[0]) & (tau <= D1[1])
        on_outer = (tau >= D2[0]) & (tau <= D2[1])
        _, dchi = raised_cosine_cutoff(grid.tau, D1, D2)
        energy = total_energy_density(w)
        lhs = float(np.sum(weights * on_inner * nabla_dw_squared(w)))
        constant = tensor_bounds(w).coercive_constant
        bound = 16.0 * dchi ** 2 * float(np.sum(weights * on_outer * energy)) + 2.0 * constant * float(
            np.sum(weights * on_outer * energy ** 2)
        )
        ratios.append(lhs / max(bound, config.ANALYSIS["residual_floor"]))
        slack.append(bound - lhs)
        details.append(f"Nt={grid.Nt}: |dchi| = {dchi:.4g}, C1 = {constant:.4g}")
    details.append(_SAMPLED.format(config.ANALYSIS["norm_safety"]))
    return inequality_report("coercive_estimate", [w.grid for w in fields], ratios, slack, details)
