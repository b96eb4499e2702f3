"""Grids on the truncated cylinder and the fields living on them."""

import dataclasses

import numpy as np

from contactinstanton import config, errors
from contactinstanton.triad import ContactTriad, TriadPoint, triad_from_id

__all__ = ["CylinderGrid", "MapField", "XiSection", "OneForm"]


@dataclasses.dataclass(frozen=True)
class CylinderGrid:
    r"""Nodes :math:`(\tau_i, t_j)` of :math:`[0, L]\times S^1` with :math:`S^1 = \mathbb{R}/\mathbb{Z}`.

    :math:`\tau` includes both ends, :math:`t` is periodic and indexed modulo ``Nt``.
    """

    L: float
    Ntau: int
    Nt: int

    def __post_init__(self):
        object.__setattr__(self, "L", float(self.L))
        if not self.L > 0:
            raise ValueError("The cylinder length has to be positive.")
        if int(self.Ntau) < 8 or int(self.Nt) < 8:
            raise ValueError("A cylinder grid needs at least 8 nodes in each direction.")
        object.__setattr__(self, "Ntau", int(self.Ntau))
        object.__setattr__(self, "Nt", int(self.Nt))

    @property
    def htau(self):
        return self.L / (self.Ntau - 1)

    @property
    def ht(self):
        return 1.0 / self.Nt

    @property
    def shape(self):
        return (self.Ntau, self.Nt)

    @property
    def size(self):
        return self.Ntau * self.Nt

    @property
    def tau(self):
        return np.linspace(0.0, self.L, self.Ntau)

    @property
    def t(self):
        return np.arange(self.Nt) * self.ht

    def mesh(self):
        """Coordinate arrays of shape ``(Ntau, Nt)``."""
        return np.meshgrid(self.tau, self.t, indexing="ij")

    def refine(self):
        """Grid with both mesh widths halved."""
        return CylinderGrid(L=self.L, Ntau=2 * self.Ntau - 1, Nt=2 * self.Nt)

    def flat_index(self, i, j):
        return i * self.Nt + (j % self.Nt)


class MapField:
    r"""A map :math:`w: [0, L]\times S^1\to M` sampled at the nodes of a grid.

    ``nodes`` holds ambient coordinates, shape ``(Ntau, Nt, n)``. Fields are
    immutable; solvers replace them as a whole.

    Raises
    ------
    ValueError
        If the node array does not match the grid or a node violates the constraint
        of the triad.
    """

    def __init__(self, grid: CylinderGrid, nodes, triad: ContactTriad, tolerance=None):
        nodes = np.array(nodes, dtype=float)
        if nodes.shape != grid.shape + (triad.dim,):
            raise ValueError(
                f"Expected nodes of shape {grid.shape + (triad.dim,)}, got {nodes.shape}."
            )
        if not np.all(np.isfinite(nodes)):
            raise ValueError("Nodes have to be finite.")
        tolerance = config.TOLERANCES["invariant"] if tolerance is None else tolerance
        violation = np.max(np.abs(triad.constraint_value(nodes)))
        if violation > tolerance:
            raise ValueError(f"Nodes leave the triad (constraint value {violation:.3e}).")
        nodes.setflags(write=False)
        self._grid = grid
        self._nodes = nodes
        self._triad = triad

    @property
    def grid(self):
        return self._grid

    @property
    def nodes(self):
        return self._nodes

    @property
    def triad(self):
        return self._triad

    def node(self, i, j):
        return TriadPoint(self._nodes[i, j % self._grid.Nt], self._triad.triad_id)

    def with_nodes(self, nodes):
        """A field on the same grid and triad with other node values."""
        return MapField(self._grid, nodes, self._triad)

    @classmethod
    def from_id(cls, grid, nodes, triad_id):
        return cls(grid, nodes, triad_from_id(triad_id))

    def __repr__(self):
        grid = self._grid
        return (
            f"MapField(triad={self._triad.triad_id!r}, L={grid.L!r}, "
            f"Ntau={grid.Ntau}, Nt={grid.Nt})"
        )


@dataclasses.dataclass(frozen=True)
class XiSection:
    r"""A section of :math:`w^*\xi`: one ambient vector in :math:`\xi_{w}` per node."""

    base: MapField
    vecs: np.ndarray

    def __post_init__(self):
        vecs = np.asarray(self.vecs, dtype=float)
        if vecs.shape != self.base.nodes.shape:
            raise ValueError("A section needs one ambient vector per node.")
        lam = np.einsum("...i,...i->...", self.base.triad.lam(self.base.nodes), vecs)
        scale = 1.0 + np.max(np.abs(vecs), initial=0.0)
        if np.max(np.abs(lam)) > config.TOLERANCES["invariant"] * scale:
            raise errors.ContractViolationError("Section vectors leave the contact planes.")
        object.__setattr__(self, "vecs", vecs)

    def norm_squared(self):
        """Pointwise squared norm in the triad metric."""
        metric = self.base.triad.metric_matrix(self.base.nodes)
        return np.einsum("...i,...ij,...j->...", self.vecs, metric, self.vecs)


@dataclasses.dataclass(frozen=True)
class OneForm:
    r"""A one-form :math:`a_\tau\,d\tau + a_t\,dt`, components per node."""

    a_tau: np.ndarray
    a_t: np.ndarray

    def compose_j(self):
        r"""The form :math:`\beta\circ j`, using :math:`j\partial_\tau = \partial_t`."""
        return OneForm(a_tau=self.a_t, a_t=-self.a_tau)

    def norm_squared(self):
        return self.a_tau ** 2 + self.a_t ** 2
