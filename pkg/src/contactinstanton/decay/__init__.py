"""Asymptotic analysis of instantons on long cylinders."""

from ._analysis import (
    DecayReport,
    ThetaReport,
    TranslatedLimit,
    analyze_decay,
    limit_orbit_distance,
    theta_component,
    translated_limits,
    write_decay_report,
)
from ._linear import LinearEvolution, linear_evolution_rate
from ._symplectization import SymplectizationReport, reconstruct_a
from ._three_interval import (
    ThreeIntervalResult,
    growth_factor,
    three_interval_bound,
    three_interval_gamma,
)

__all__ = [
    "ThreeIntervalResult",
    "three_interval_bound",
    "three_interval_gamma",
    "growth_factor",
    "DecayReport",
    "ThetaReport",
    "TranslatedLimit",
    "analyze_decay",
    "theta_component",
    "limit_orbit_distance",
    "translated_limits",
    "write_decay_report",
    "LinearEvolution",
    "linear_evolution_rate",
    "SymplectizationReport",
    "reconstruct_a",
]
