"""Reeb flow, closed orbits and the asymptotic operator."""

from ._orbits import (
    ClosedOrbit,
    NondegeneracyReport,
    coordinate_orbit,
    find_closed_orbit,
    flow,
    flow_points,
    nondegeneracy,
)
from ._spectrum import (
    KernelCorrespondence,
    SpectrumResult,
    assemble_Az,
    kernel_correspondence_check,
    near_kernel_threshold,
)

__all__ = [
    "ClosedOrbit",
    "NondegeneracyReport",
    "flow",
    "flow_points",
    "find_closed_orbit",
    "coordinate_orbit",
    "nondegeneracy",
    "SpectrumResult",
    "KernelCorrespondence",
    "assemble_Az",
    "near_kernel_threshold",
    "kernel_correspondence_check",
]
