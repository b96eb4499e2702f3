"""Identity reports and the estimation of observed orders."""

import dataclasses
import logging
from typing import List, Optional, Sequence

import numpy as np

from contactinstanton import config, utils
from contactinstanton.cylfield import CylinderGrid, MapField

from ._bundle import interior

__all__ = [
    "IdentityReport",
    "identity_report",
    "inequality_report",
    "as_field_list",
    "relative_residual",
]

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class IdentityReport:
    """Residuals of one identity over a sequence of resolutions.

    ``resolutions`` holds the circle node counts ``Nt`` of the fields. For identities
    ``residuals`` are maximal interior nodal residuals, relative to one plus the size of
    the compared terms; for inequalities they are the ratios of the left-hand side to
    the bound, and ``slack`` holds the smallest nodal or integrated margins.
    """

    name: str
    resolutions: List[int]
    residuals: List[float]
    order: float
    expected_order: Optional[float]
    passed: bool
    details: List[str] = dataclasses.field(default_factory=list)
    slack: Optional[List[float]] = None


def as_field_list(fields) -> List[MapField]:
    """A single field or a sequence of fields ordered from coarse to fine."""
    if isinstance(fields, MapField):
        return [fields]
    fields = list(fields)
    if not fields:
        raise ValueError("At least one field is needed.")
    return sorted(fields, key=lambda w: w.grid.Nt)


def identity_report(
    name, grids: Sequence[CylinderGrid], residuals, expected_order=2.0, cap=np.inf, details=()
) -> IdentityReport:
    """Estimate the order of ``residuals`` under refinement and decide the verdict.

    Residuals at or below ``config.ANALYSIS["residual_floor"]`` pass without an order.
    Otherwise at least two resolutions are needed, the residuals must not increase,
    the observed order must lie in ``order_band`` times ``expected_order`` and the
    finest residual must not exceed ``cap``.
    """
    residuals = [float(value) for value in residuals]
    details = list(details)
    floor = config.ANALYSIS["residual_floor"]
    low, high = config.ANALYSIS["order_band"]
    resolutions = [grid.Nt for grid in grids]
    order = utils.convergence_order([1.0 / n for n in resolutions], residuals)
    if max(residuals) <= floor:
        passed = True
        details.append("exact to the residual floor")
    elif len(residuals) < 2:
        passed = False
        details.append("an order estimate needs two resolutions")
    else:
        monotone = all(b <= a for a, b in zip(residuals, residuals[1:]))
        in_band = low * expected_order <= order <= high * expected_order
        passed = bool(monotone and in_band and residuals[-1] <= cap)
        if not monotone:
            details.append("residuals increase under refinement")
        elif not in_band and abs(order) < 0.1:
            details.append("residual stagnates at a resolution-independent value")
    report = IdentityReport(
        name=name,
        resolutions=resolutions,
        residuals=residuals,
        order=order,
        expected_order=expected_order,
        passed=passed,
        details=details,
    )
    logger.info("%s: residuals %s, order %.3f, passed %s", name, residuals, order, passed)
    return report


def inequality_report(name, grids: Sequence[CylinderGrid], ratios, slack, details=()):
    """An inequality holds at every resolution iff each ratio is at most one."""
    ratios = [float(value) for value in ratios]
    report = IdentityReport(
        name=name,
        resolutions=[grid.Nt for grid in grids],
        residuals=ratios,
        order=np.nan,
        expected_order=None,
        passed=bool(all(ratio <= 1.0 for ratio in ratios)),
        details=list(details),
        slack=[float(value) for value in slack],
    )
    logger.info("%s: ratios %s, passed %s", name, ratios, report.passed)
    return report


def relative_residual(residual, scale):
    """Largest interior residual relative to one plus the largest interior scale."""
    size = float(np.max(interior(np.abs(residual))))
    return size / (1.0 + float(np.max(interior(np.abs(scale)))))
