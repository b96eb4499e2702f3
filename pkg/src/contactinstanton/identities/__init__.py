"""Numerical verification of the tensor identities and inequalities of instantons."""

from ._bundle import (
    BundleGeometry,
    CovariantDifferences,
    bundle_geometry,
    form_inner,
    random_form,
    star,
    wedge,
)
from ._estimates import (
    TensorBounds,
    apriori_density_check,
    coercive_estimate_check,
    nabla_dw_squared,
    pointwise_coercive_check,
    raised_cosine_cutoff,
    tensor_bounds,
)
from ._fundamental import fundamental_equation_residual, on_shell, two_form_equation_residual
from ._report import IdentityReport, identity_report, inequality_report
from ._suite import SUITE, hodge_convention_selftest, run_suite, write_suite_csv
from ._weitzenboeck import (
    bochner_residual,
    inner_star_residual,
    lambda_weitzenboeck_residual,
    laplacian_double_identity,
    metric_property_residual,
    weitzenboeck_density_residual,
    weitzenboeck_forms_residual,
)

__all__ = [
    "IdentityReport",
    "identity_report",
    "inequality_report",
    "CovariantDifferences",
    "BundleGeometry",
    "bundle_geometry",
    "random_form",
    "form_inner",
    "star",
    "wedge",
    "on_shell",
    "fundamental_equation_residual",
    "two_form_equation_residual",
    "weitzenboeck_density_residual",
    "lambda_weitzenboeck_residual",
    "weitzenboeck_forms_residual",
    "bochner_residual",
    "inner_star_residual",
    "metric_property_residual",
    "laplacian_double_identity",
    "TensorBounds",
    "tensor_bounds",
    "nabla_dw_squared",
    "raised_cosine_cutoff",
    "apriori_density_check",
    "pointwise_coercive_check",
    "coercive_estimate_check",
    "SUITE",
    "hodge_convention_selftest",
    "run_suite",
    "write_suite_csv",
]
