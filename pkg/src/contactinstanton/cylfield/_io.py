"""Plain-text storage of map fields.

The first line holds ``triad_id L Ntau Nt``, followed by one line ``i j x1 ... xn``
per node in row-major order. Floats are written with 17 significant digits, so
finite doubles round-trip exactly.
"""

import pathlib

import numpy as np

from contactinstanton.triad import triad_from_id

from ._grid import CylinderGrid, MapField

__all__ = ["write_map_field", "read_map_field"]


def _format(value):
    return "%.17g" % value


def write_map_field(path, w: MapField):
    """Write ``w`` to ``path``."""
    grid = w.grid
    lines = [f"{w.triad.triad_id} {_format(grid.L)} {grid.Ntau} {grid.Nt}"]
    for i in range(grid.Ntau):
        for j in range(grid.Nt):
            coords = " ".join(_format(x) for x in w.nodes[i, j])
            lines.append(f"{i} {j} {coords}")
    pathlib.Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_map_field(path) -> MapField:
    """Read a field written by :func:`write_map_field`.

    Raises
    ------
    ValueError
        If the file is malformed, incomplete, or its nodes leave the triad.
    """
    lines = pathlib.Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path} is empty.")
    header = lines[0].split()
    if len(header) != 4:
        raise ValueError(f"Malformed header in {path}: {lines[0]!r}")
    triad = triad_from_id(header[0])
    grid = CylinderGrid(L=float(header[1]), Ntau=int(header[2]), Nt=int(header[3]))
    nodes = np.full(grid.shape + (triad.dim,), np.nan)
    seen = np.zeros(grid.shape, dtype=bool)
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 + triad.dim:
            raise ValueError(f"{path}:{number}: expected {2 + triad.dim} columns.")
        i, j = int(parts[0]), int(parts[1])
        if not (0 <= i < grid.Ntau and 0 <= j < grid.Nt):
            raise ValueError(f"{path}:{number}: node ({i}, {j}) is off the grid.")
        nodes[i, j] = [float(x) for x in parts[2:]]
        seen[i, j] = True
    if not np.all(seen):
        raise ValueError(f"{path} misses {np.count_nonzero(~seen)} nodes.")
    return MapField(grid, nodes, triad)
