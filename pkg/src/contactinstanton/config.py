"""Configurations for all sorts of things."""
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

__all__ = [
    "FINITE_DIFFERENCES",
    "INTEGRATION",
    "TOLERANCES",
    "ANALYSIS",
    "set_finite_difference_parameters",
    "set_integration_parameters",
    "set_tolerance_parameters",
    "set_analysis_parameters",
    "finite_difference_context",
    "integration_context",
    "tolerance_context",
    "analysis_context",
]

FINITE_DIFFERENCES = dict(
    first_order=1e-4,
    nested=1e-3,
    pointwise=1e-5,
)
"""Steps of the finite differences of tensor fields.

``first_order`` differentiates tensors once, ``nested`` is the outer step of
second derivatives (curvature) and ``pointwise`` differentiates the pointwise
coefficient fields entering the solver Jacobian."""


def set_finite_difference_parameters(first_order, nested, pointwise):
    """Change the finite-difference steps."""
    # pylint: disable=global-statement
    global FINITE_DIFFERENCES
    FINITE_DIFFERENCES = dict(
        first_order=first_order,
        nested=nested,
        pointwise=pointwise,
    )


@dataclass
class finite_difference_context:
    """Context manager for specific finite-difference steps."""

    first_order: Optional[float] = None
    nested: Optional[float] = None
    pointwise: Optional[float] = None

    _old_values: Optional[Dict] = None

    def __enter__(self):
        self._old_values = FINITE_DIFFERENCES.copy()
        set_finite_difference_parameters(
            first_order=_keep(self.first_order, self._old_values["first_order"]),
            nested=_keep(self.nested, self._old_values["nested"]),
            pointwise=_keep(self.pointwise, self._old_values["pointwise"]),
        )

    def __exit__(self, *args, **kwargs):
        set_finite_difference_parameters(**self._old_values)


INTEGRATION = dict(
    steps_per_unit=1000,
    newton_tol=1e-10,
    newton_max_iters=30,
)
"""RK4 resolution of the Reeb flow (steps per unit time) and the closed-orbit Newton
iteration."""


def set_integration_parameters(steps_per_unit, newton_tol, newton_max_iters):
    """Change parameters of the Reeb flow integration."""
    # pylint: disable=global-statement
    global INTEGRATION
    INTEGRATION = dict(
        steps_per_unit=steps_per_unit,
        newton_tol=newton_tol,
        newton_max_iters=newton_max_iters,
    )


@dataclass
class integration_context:
    """Context manager for specific integration parameters."""

    steps_per_unit: Optional[int] = None
    newton_tol: Optional[float] = None
    newton_max_iters: Optional[int] = None

    _old_values: Optional[Dict] = None

    def __enter__(self):
        self._old_values = INTEGRATION.copy()
        set_integration_parameters(
            steps_per_unit=_keep(
                self.steps_per_unit, self._old_values["steps_per_unit"]
            ),
            newton_tol=_keep(self.newton_tol, self._old_values["newton_tol"]),
            newton_max_iters=_keep(
                self.newton_max_iters, self._old_values["newton_max_iters"]
            ),
        )

    def __exit__(self, *args, **kwargs):
        set_integration_parameters(**self._old_values)


TOLERANCES = dict(
    invariant=1e-10,
    constraint=1e-12,
    assembly=1e-6,
    nondegeneracy=1e-6,
    kernel_factor=10.0,
)
"""Tolerances of the invariant checks, the constraint projection, the symmetry of
assembled operators, the nondegeneracy verdict and the near-kernel threshold factor."""


def set_tolerance_parameters(
    invariant, constraint, assembly, nondegeneracy, kernel_factor
):
    """Change the tolerances."""
    # pylint: disable=global-statement
    global TOLERANCES
    TOLERANCES = dict(
        invariant=invariant,
        constraint=constraint,
        assembly=assembly,
        nondegeneracy=nondegeneracy,
        kernel_factor=kernel_factor,
    )


@dataclass
class tolerance_context:
    """Context manager for specific tolerances."""

    invariant: Optional[float] = None
    constraint: Optional[float] = None
    assembly: Optional[float] = None
    nondegeneracy: Optional[float] = None
    kernel_factor: Optional[float] = None

    _old_values: Optional[Dict] = None

    def __enter__(self):
        self._old_values = TOLERANCES.copy()
        old = self._old_values
        set_tolerance_parameters(
            invariant=_keep(self.invariant, old["invariant"]),
            constraint=_keep(self.constraint, old["constraint"]),
            assembly=_keep(self.assembly, old["assembly"]),
            nondegeneracy=_keep(self.nondegeneracy, old["nondegeneracy"]),
            kernel_factor=_keep(self.kernel_factor, old["kernel_factor"]),
        )

    def __exit__(self, *args, **kwargs):
        set_tolerance_parameters(**self._old_values)


ANALYSIS = dict(
    gamma=0.4,
    charge_threshold=1e-6,
    norm_safety=1.1,
    noise_floor=100.0,
    residual_floor=1e-8,
    order_band=(0.8, 1.5),
)
"""Parameters of the asymptotic analysis and the identity suite.

``noise_floor`` is a multiple of machine epsilon below which windowed energies are
ignored by decay fits, ``residual_floor`` the residual below which an identity passes
without an order estimate, and ``order_band`` the accepted band of observed orders
relative to the expected order."""


def set_analysis_parameters(
    gamma, charge_threshold, norm_safety, noise_floor, residual_floor, order_band
):
    """Change parameters of the asymptotic analysis."""
    # pylint: disable=global-statement
    global ANALYSIS
    ANALYSIS = dict(
        gamma=gamma,
        charge_threshold=charge_threshold,
        norm_safety=norm_safety,
        noise_floor=noise_floor,
        residual_floor=residual_floor,
        order_band=order_band,
    )


@dataclass
class analysis_context:
    """Context manager for specific analysis parameters."""

    gamma: Optional[float] = None
    charge_threshold: Optional[float] = None
    norm_safety: Optional[float] = None
    noise_floor: Optional[float] = None
    residual_floor: Optional[float] = None
    order_band: Optional[Tuple[float, float]] = None

    _old_values: Optional[Dict] = None

    def __enter__(self):
        self._old_values = ANALYSIS.copy()
        old = self._old_values
        set_analysis_parameters(
            gamma=_keep(self.gamma, old["gamma"]),
            charge_threshold=_keep(self.charge_threshold, old["charge_threshold"]),
            norm_safety=_keep(self.norm_safety, old["norm_safety"]),
            noise_floor=_keep(self.noise_floor, old["noise_floor"]),
            residual_floor=_keep(self.residual_floor, old["residual_floor"]),
            order_band=_keep(self.order_band, old["order_band"]),
        )

    def __exit__(self, *args, **kwargs):
        set_analysis_parameters(**self._old_values)


def _keep(new, old):
    return old if new is None else new
