"""Concurrent runs of the identity suite and its CSV matrix."""

import concurrent.futures
import logging
import pathlib
from typing import List, Sequence

import numpy as np

from contactinstanton.cylfield import CylinderGrid

from ._bundle import random_form, star
from ._estimates import apriori_density_check, pointwise_coercive_check
from ._fundamental import fundamental_equation_residual, two_form_equation_residual
from ._report import IdentityReport, as_field_list
from ._weitzenboeck import (
    inner_star_residual,
    lambda_weitzenboeck_residual,
    laplacian_double_identity,
    metric_property_residual,
    weitzenboeck_density_residual,
    weitzenboeck_forms_residual,
)

__all__ = ["SUITE", "hodge_convention_selftest", "run_suite", "write_suite_csv"]

logger = logging.getLogger(__name__)

SUITE = {
    "fundamental_equation": fundamental_equation_residual,
    "two_form_equation": two_form_equation_residual,
    "weitzenboeck_density": weitzenboeck_density_residual,
    "lambda_weitzenboeck": lambda_weitzenboeck_residual,
    "weitzenboeck_forms": weitzenboeck_forms_residual,
    "inner_star": inner_star_residual,
    "metric_property": metric_property_residual,
    "laplacian_double": laplacian_double_identity,
    "apriori_density": apriori_density_check,
    "pointwise_coercive": pointwise_coercive_check,
}
"""Checks of the default suite; each takes the list of fields, coarse to fine."""


def hodge_convention_selftest(seed=0):
    r"""Largest deviation from :math:`** = -1` on random one-forms."""
    grid = CylinderGrid(L=1.0, Ntau=9, Nt=8)
    beta = random_form(grid, seed, stream="hodge-selftest")
    twice = star(star(beta))
    return float(max(np.max(np.abs(twice[k] + beta[k])) for k in range(2)))


def run_suite(fields, checks=None, max_workers=None) -> List[IdentityReport]:
    """Run identity checks concurrently on fields of increasing resolution.

    ``checks`` maps names to callables taking the list of fields and defaults to
    :data:`SUITE`. Reports come back in the order of ``checks``.

    Raises
    ------
    RuntimeError
        If the Hodge star conventions fail their self-test.
    """
    if hodge_convention_selftest() > 0.0:
        raise RuntimeError("The Hodge star does not square to -1 on one-forms.")
    fields = as_field_list(fields)
    checks = SUITE if checks is None else dict(checks)
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {name: pool.submit(check, fields) for name, check in checks.items()}
        reports = [futures[name].result() for name in checks]
    failed = [report.name for report in reports if not report.passed]
    logger.info("Identity suite: %d of %d passed", len(reports) - len(failed), len(reports))
    if failed:
        logger.warning("Failed identities: %s", ", ".join(failed))
    return reports


def write_suite_csv(path, reports: Sequence[IdentityReport]):
    """Write the matrix identity x resolution of residuals with order and verdict."""
    resolutions = sorted({n for report in reports for n in report.resolutions})
    lines = [",".join(["identity"] + [f"Nt={n}" for n in resolutions] + ["order", "pass"])]
    for report in reports:
        by_resolution = dict(zip(report.resolutions, report.residuals))
        cells = [
            f"{by_resolution[n]:.17g}" if n in by_resolution else "" for n in resolutions
        ]
        lines.append(
            ",".join([report.name] + cells + [f"{report.order:.6g}", str(int(report.passed))])
        )
    pathlib.Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
