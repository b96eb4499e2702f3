r"""Weitzenböck and Bochner identities for forms with values in :math:`w^*\xi`.

The Hodge Laplacian is :math:`\Delta^\nabla = d^\nabla\delta^\nabla + \delta^\nabla d^\nabla`
and the scalar Laplacian of the Bochner formulas is the analyst's
:math:`\Delta_a = \partial_\tau^2 + \partial_t^2`, so that

.. math:: \tfrac12\Delta_a|\beta|^2 = |\nabla\beta|^2 - \langle\Delta^\nabla\beta, \beta\rangle
          + \langle\mathrm{Ric}\,\beta, \beta\rangle

on the flat cylinder. Identities involving nested differences converge at order
three halves or better; the one-sided stencils at the ends of the cylinder are
excluded from the nodal residuals.
"""

import logging

import numpy as np

from contactinstanton.cylfield import MapField, integrate

from ._bundle import (
    CovariantDifferences,
    bundle_geometry,
    form_inner,
    inner,
    random_form,
    star,
    wedge,
)
from ._fundamental import precondition_details
from ._report import IdentityReport, as_field_list, identity_report, relative_residual

__all__ = [
    "weitzenboeck_density_residual",
    "lambda_weitzenboeck_residual",
    "weitzenboeck_forms_residual",
    "bochner_residual",
    "inner_star_residual",
    "metric_property_residual",
    "laplacian_double_identity",
]

logger = logging.getLogger(__name__)

NESTED_ORDER = 1.5
"""Expected order of identities evaluated with nested differences."""


def _scale(*terms):
    return sum(np.abs(term) for term in terms)


def _theta_coefficient(bundle):
    r"""Coefficient :math:`\varphi` of the two-form :math:`\Theta = -2\,d^{\nabla}(d^\pi w)`
    of an instanton, :math:`\varphi = a_t\mathcal{L}\beta_t + a_\tau\mathcal{L}\beta_\tau`."""
    beta_tau, beta_t = bundle.dpi
    geometry = bundle.geometry
    return geometry.a_t * bundle.lie_apply(beta_t) + geometry.a_tau * bundle.lie_apply(beta_tau)


def _density_residual(w: MapField):
    bundle = bundle_geometry(w)
    differences = bundle.differences
    beta = bundle.dpi
    lhs = 0.5 * differences.scalar_laplacian(bundle.geometry.energy_density)
    gradient = differences.gradient_norm_squared(beta)
    curvature = form_inner(bundle.curvature_term(beta), beta)
    theta = form_inner(differences.delta_two_form(_theta_coefficient(bundle)), beta)
    residual = lhs - gradient - curvature - theta
    return relative_residual(residual, _scale(lhs, gradient, curvature, theta))


def weitzenboeck_density_residual(fields) -> IdentityReport:
    r"""Residual of the Weitzenböck formula for the energy density of an instanton,

    .. math:: \tfrac12\Delta_a e^\pi = |\nabla^\pi d^\pi w|^2
              + \langle\mathrm{Ric}\,d^\pi w, d^\pi w\rangle
              + \langle\delta^{\nabla^\pi}\Theta, d^\pi w\rangle,

    where :math:`\Theta` collects the terms of :math:`\mathcal{L}_{X_\lambda}J` paired
    with :math:`w^*\lambda`.
    """
    fields = as_field_list(fields)
    return identity_report(
        "weitzenboeck_density",
        [w.grid for w in fields],
        [_density_residual(w) for w in fields],
        expected_order=NESTED_ORDER,
        details=precondition_details(fields),
    )


def _lambda_residual(w: MapField):
    bundle = bundle_geometry(w)
    geometry = bundle.geometry
    plain = CovariantDifferences(w.grid)
    gamma = (geometry.a_tau, geometry.a_t)
    energy = geometry.energy_density
    lhs = 0.5 * plain.scalar_laplacian(geometry.a_tau ** 2 + geometry.a_t ** 2)
    gradient = plain.gradient_norm_squared(gamma)
    source = 0.5 * (geometry.a_tau * plain.t(energy) - geometry.a_t * plain.tau(energy))
    return relative_residual(lhs - gradient + source, _scale(lhs, gradient, source))


def lambda_weitzenboeck_residual(fields) -> IdentityReport:
    r"""Residual of the Bochner formula for :math:`w^*\lambda` of an instanton.

    With :math:`d(w^*\lambda\circ j) = 0` and :math:`d(w^*\lambda) = \frac12 e^\pi\,d\tau\wedge dt`,

    .. math:: \tfrac12\Delta_a|w^*\lambda|^2 = |\nabla w^*\lambda|^2
              - \tfrac12(a_\tau\partial_t e^\pi - a_t\partial_\tau e^\pi).
    """
    fields = as_field_list(fields)
    return identity_report(
        "lambda_weitzenboeck",
        [w.grid for w in fields],
        [_lambda_residual(w) for w in fields],
        expected_order=NESTED_ORDER,
        details=precondition_details(fields),
    )


def _form_source(beta, seed):
    if beta is None:
        return lambda grid: random_form(grid, seed)
    if callable(beta):
        return beta
    return lambda grid: beta


def _forms_residuals(w: MapField, beta):
    bundle = bundle_geometry(w)
    differences = bundle.differences
    hodge = differences.hodge_laplacian(beta)
    rough = differences.rough_laplacian(beta)
    curvature = bundle.curvature_term(beta)
    routes = max(
        relative_residual(hodge[k] - rough[k] - curvature[k], _scale(hodge[k], rough[k], curvature[k]))
        for k in range(2)
    )

    lhs = 0.5 * differences.scalar_laplacian(form_inner(beta, beta))
    gradient = differences.gradient_norm_squared(beta)
    laplacian = form_inner(hodge, beta)
    ricci = form_inner(curvature, beta)
    bochner = relative_residual(
        lhs - gradient + laplacian - ricci, _scale(lhs, gradient, laplacian, ricci)
    )
    return routes, bochner


def weitzenboeck_forms_residual(fields, beta=None, seed=0) -> IdentityReport:
    r"""Compare :math:`d^\nabla\delta^\nabla + \delta^\nabla d^\nabla` with
    :math:`-\mathrm{Tr}\,\nabla^2` plus the curvature term on a one-form.

    ``beta`` is a pair of complex arrays matching the grid of a single field, a
    callable ``beta(grid)`` or ``None`` for :func:`random_form` with ``seed``. The
    identity holds for any map, on-shell or not. The details carry the residuals of
    the scalar Bochner formula.
    """
    fields = as_field_list(fields)
    source = _form_source(beta, seed)
    results = [_forms_residuals(w, source(w.grid)) for w in fields]
    details = [f"Nt={w.grid.Nt}: Bochner {bochner:.3e}" for w, (_, bochner) in zip(fields, results)]
    return identity_report(
        "weitzenboeck_forms",
        [w.grid for w in fields],
        [routes for routes, _ in results],
        expected_order=NESTED_ORDER,
        details=details,
    )


def bochner_residual(fields, beta=None, seed=0) -> IdentityReport:
    r"""Residual of :math:`\frac12\Delta_a|\beta|^2 = |\nabla\beta|^2 - \langle\Delta^\nabla\beta,
    \beta\rangle + \langle\mathrm{Ric}\,\beta, \beta\rangle` on a one-form."""
    fields = as_field_list(fields)
    source = _form_source(beta, seed)
    return identity_report(
        "bochner",
        [w.grid for w in fields],
        [_forms_residuals(w, source(w.grid))[1] for w in fields],
        expected_order=NESTED_ORDER,
    )


def inner_star_residual(fields, seed=0) -> IdentityReport:
    r"""Nodal deviation from :math:`\langle\beta_1, \beta_2\rangle = *(\beta_1\wedge *\beta_2)`
    on random forms; exact up to rounding at every resolution."""
    fields = as_field_list(fields)
    residuals = []
    for w in fields:
        first = random_form(w.grid, seed, stream="inner-star-first")
        second = random_form(w.grid, seed, stream="inner-star-second")
        lhs = form_inner(first, second)
        residuals.append(relative_residual(lhs - wedge(first, star(second)), lhs))
    return identity_report("inner_star", [w.grid for w in fields], residuals)


def _compact_envelope(grid):
    tau, _ = grid.mesh()
    return np.sin(np.pi * tau / grid.L) ** 2


def _metric_property(w: MapField, seed):
    grid = w.grid
    differences = bundle_geometry(w).differences
    envelope = _compact_envelope(grid)
    beta = tuple(envelope * part for part in random_form(grid, seed, stream="metric-form"))
    phi = random_form(grid, seed, stream="metric-two-form")[0]
    first = integrate(inner(differences.d_one_form(beta), phi), grid)
    second = integrate(form_inner(beta, differences.delta_two_form(phi)), grid)
    return abs(first - second) / (1.0 + abs(first))


def metric_property_residual(fields, seed=0) -> IdentityReport:
    r"""Integration by parts :math:`\int\langle d^\nabla\beta_0, \beta_1\rangle
    = \int\langle\beta_0, \delta^\nabla\beta_1\rangle` for a one-form :math:`\beta_0`
    vanishing to second order at both ends of the cylinder and a two-form
    :math:`\beta_1`, both with values in :math:`w^*\xi`."""
    fields = as_field_list(fields)
    return identity_report(
        "metric_property",
        [w.grid for w in fields],
        [_metric_property(w, seed) for w in fields],
    )


def _double_residual(w: MapField):
    bundle = bundle_geometry(w)
    differences = bundle.differences
    partial = bundle.partial
    lhs = form_inner(differences.hodge_laplacian(partial), partial)
    rhs = 2.0 * form_inner(differences.delta_two_form(differences.d_one_form(partial)), partial)
    return relative_residual(lhs - rhs, _scale(lhs, rhs))


def laplacian_double_identity(fields) -> IdentityReport:
    r"""Residual of :math:`\langle\Delta^{\nabla^\pi}\partial^\pi w, \partial^\pi w\rangle
    = 2\langle\delta^{\nabla^\pi}d^{\nabla^\pi}\partial^\pi w, \partial^\pi w\rangle`.

    The identity rests on :math:`*\partial^\pi w = -J\partial^\pi w` and the
    :math:`J`-linearity of the connection, both of which hold for the discrete
    operators, so it is met to rounding for any map.
    """
    fields = as_field_list(fields)
    return identity_report(
        "laplacian_double",
        [w.grid for w in fields],
        [_double_residual(w) for w in fields],
        details=precondition_details(fields),
    )
