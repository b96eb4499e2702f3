"""Contact triads, their connection and curvature."""

from ._connection import (
    AxiomReport,
    ConnectionEval,
    axiom_check,
    christoffel_symbols,
    connection_eval,
    connection_form,
    covariant_derivative,
    covariant_derivative_lie_J,
    curvature_form,
    curvature_pi,
    torsion,
    triad_connection,
)
from ._flow import integrate, rk4_step
from ._geometry import (
    XiFrame,
    check_triad_invariants,
    compatibilize,
    lie_derivative_J,
    lie_derivative_matrix,
    project_xi,
    triad_metric,
    xi_frame,
)
from ._models import (
    GOLDEN_RATIO,
    ContactTriad,
    EllipsoidTriad,
    FlatContactTriad,
    PerturbedEllipsoidTriad,
    Tangent,
    TriadPoint,
    polar_complex_structure,
    triad_from_id,
)
from ._transport import parallel_transport

__all__ = [
    "GOLDEN_RATIO",
    "TriadPoint",
    "Tangent",
    "ContactTriad",
    "FlatContactTriad",
    "EllipsoidTriad",
    "PerturbedEllipsoidTriad",
    "triad_from_id",
    "polar_complex_structure",
    "XiFrame",
    "project_xi",
    "triad_metric",
    "compatibilize",
    "xi_frame",
    "lie_derivative_matrix",
    "lie_derivative_J",
    "check_triad_invariants",
    "ConnectionEval",
    "AxiomReport",
    "christoffel_symbols",
    "connection_form",
    "connection_eval",
    "covariant_derivative",
    "triad_connection",
    "torsion",
    "axiom_check",
    "curvature_form",
    "curvature_pi",
    "covariant_derivative_lie_J",
    "parallel_transport",
    "rk4_step",
    "integrate",
]
