"""Fields on the truncated cylinder, their energies and invariants."""

from ._energy import (
    EnergyIdentityReport,
    EnergyReport,
    SliceTable,
    charge_action_slices,
    check_energy_identities,
    closedness_density,
    energies,
)
from ._forms import (
    FieldGeometry,
    dbar_pi,
    energy_density,
    field_geometry,
    partial_pi,
    pullback_lambda,
    staggered_pullback,
    total_energy_density,
)
from ._grid import CylinderGrid, MapField, OneForm, XiSection
from ._io import read_map_field, write_map_field
from ._stencils import (
    circle_integral,
    curl,
    d_t,
    d_tau,
    edge_divergence,
    edge_pairs,
    integrate,
    l2_norm,
    quadrature_weights,
    t_operator,
    tau_operator,
)

__all__ = [
    "CylinderGrid",
    "MapField",
    "XiSection",
    "OneForm",
    "d_tau",
    "d_t",
    "curl",
    "quadrature_weights",
    "integrate",
    "circle_integral",
    "l2_norm",
    "tau_operator",
    "t_operator",
    "edge_pairs",
    "edge_divergence",
    "FieldGeometry",
    "field_geometry",
    "pullback_lambda",
    "dbar_pi",
    "partial_pi",
    "energy_density",
    "total_energy_density",
    "staggered_pullback",
    "EnergyReport",
    "EnergyIdentityReport",
    "SliceTable",
    "energies",
    "closedness_density",
    "check_energy_identities",
    "charge_action_slices",
    "write_map_field",
    "read_map_field",
]
