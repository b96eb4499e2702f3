"""Contact instantons on the truncated cylinder by residual minimization."""

from ._fields import (
    initial_guess,
    massless_instanton,
    oracle_flat,
    perturb_interior,
    trivial_cylinder,
)
from ._functional import Linearization, functional, gradient, linearize, residual_vector
from ._solver import HistoryEntry, SolveConfig, SolveResult, solve, write_history

__all__ = [
    "functional",
    "gradient",
    "linearize",
    "residual_vector",
    "Linearization",
    "SolveConfig",
    "SolveResult",
    "HistoryEntry",
    "solve",
    "write_history",
    "oracle_flat",
    "trivial_cylinder",
    "massless_instanton",
    "initial_guess",
    "perturb_interior",
]
