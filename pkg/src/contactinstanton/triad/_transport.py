"""Parallel transport in the contact planes."""

import numpy as np

from contactinstanton import errors

from ._connection import connection_form
from ._models import ContactTriad, Tangent, TriadPoint

__all__ = ["parallel_transport"]

_J0 = np.array([[0.0, -1.0], [1.0, 0.0]])


def parallel_transport(triad: ContactTriad, curve, v0, tolerance=1e-8):
    r"""Transport ``v0`` along a sampled curve with :math:`\nabla^\pi_s \Xi = 0`.

    The curve is given by an even number of uniform steps, ``curve`` having shape
    ``(2m + 1, n)``. In the unitary frame the transported vector has coordinates
    solving :math:`c' = -\alpha(\dot\gamma)J_0c`, integrated by RK4 over pairs of
    steps with the midpoint sample as the half step.

    Raises
    ------
    IntegrationError
        If the curve leaves the constraint set.
    """
    curve = np.asarray(curve, dtype=float)
    if curve.ndim != 2 or curve.shape[0] % 2 != 1:
        raise ValueError("The curve needs an odd number of samples, at least one.")
    if np.any(np.abs(triad.constraint_value(curve)) > tolerance):
        raise errors.IntegrationError("The curve leaves the constraint set.")
    vec = v0.vec if isinstance(v0, Tangent) else np.asarray(v0, dtype=float)
    coords = triad.xi_coframe(curve[0]) @ vec
    if curve.shape[0] > 1:
        intervals = curve.shape[0] - 1
        spacing = 1.0 / intervals
        velocity = np.gradient(curve, spacing, axis=0, edge_order=2)
        rates = connection_form(triad, curve, velocity)
        coords = _rk4_rotation(coords, rates, 2.0 * spacing)
    frame = triad.unitary_frame(curve[-1])
    result = frame @ coords
    if isinstance(v0, Tangent):
        return Tangent(base=TriadPoint(curve[-1], triad.triad_id), vec=result)
    return result


def _rk4_rotation(coords, rates, step):
    def rhs(rate, value):
        return -rate * (_J0 @ value)

    for start in range(0, rates.shape[0] - 1, 2):
        a0, a1, a2 = rates[start], rates[start + 1], rates[start + 2]
        k1 = rhs(a0, coords)
        k2 = rhs(a1, coords + 0.5 * step * k1)
        k3 = rhs(a1, coords + 0.5 * step * k2)
        k4 = rhs(a2, coords + step * k3)
        coords = coords + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return coords
