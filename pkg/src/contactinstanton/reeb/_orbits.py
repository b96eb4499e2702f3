r"""Reeb flow, closed Reeb orbits and their linearized return maps."""

import dataclasses
import logging
import math

import numpy as np

from contactinstanton import config, errors
from contactinstanton.triad import ContactTriad, TriadPoint, integrate

__all__ = [
    "ClosedOrbit",
    "NondegeneracyReport",
    "flow",
    "flow_points",
    "find_closed_orbit",
    "coordinate_orbit",
    "nondegeneracy",
]

logger = logging.getLogger(__name__)

_MAX_STEPS = 10 ** 8


def _steps_for(time):
    longest = float(np.max(np.abs(time)))
    steps = max(1, int(math.ceil(longest * config.INTEGRATION["steps_per_unit"])))
    if steps > _MAX_STEPS:
        raise errors.IntegrationError(f"Flow time {longest} needs too many steps.")
    return steps


def flow_points(triad: ContactTriad, points, times, variational=False):
    r"""Flow ``points`` by individual ``times`` with RK4 and re-projection.

    All points share the number of steps of the longest time, so each is integrated
    with a step at most ``1 / steps_per_unit``.

    Raises
    ------
    IntegrationError
        If the step underflows or the trajectory becomes non-finite.
    """
    points = np.asarray(points, dtype=float)
    times = np.broadcast_to(np.asarray(times, dtype=float), points.shape[:-1])
    if not np.all(np.isfinite(times)):
        raise errors.IntegrationError("Flow times have to be finite.")
    steps = _steps_for(times)
    if np.any((times != 0) & (np.abs(times / steps) < np.finfo(float).tiny)):
        raise errors.IntegrationError("The RK4 step underflows.")
    result = integrate(triad, points, times, steps, variational=variational)
    end = result[0] if variational else result
    if not np.all(np.isfinite(end)):
        raise errors.IntegrationError("The Reeb flow left the domain of the triad.")
    return result


def flow(triad: ContactTriad, p, time):
    r"""The Reeb flow :math:`\phi^{t}(p)`.

    Returns a :class:`TriadPoint` if ``p`` is one, otherwise an array.

    Examples
    --------
    >>> from contactinstanton.triad import FlatContactTriad
    >>> flow(FlatContactTriad(), [0.0, 0.0, 0.0], 2.5)
    array([0. , 0. , 2.5])
    """
    coords = p.coords if isinstance(p, TriadPoint) else np.asarray(p, dtype=float)
    end = flow_points(triad, coords, time)
    if isinstance(p, TriadPoint):
        return TriadPoint(end, triad.triad_id)
    return end


@dataclasses.dataclass(frozen=True)
class ClosedOrbit:
    r"""A closed Reeb orbit :math:`z(t) = \gamma(Tt)`, :math:`t\in[0, 1]`.

    ``return_map`` is the matrix of :math:`\Psi_p = d\phi^T(p)|_{\xi_p}` in the unitary
    frame at ``p`` and ``floquet`` its eigenvalues.
    """

    triad: ContactTriad
    p: TriadPoint
    period: float
    samples: np.ndarray
    return_map: np.ndarray
    floquet: np.ndarray

    @property
    def Nt(self):
        return self.samples.shape[0]

    def sample(self, count):
        r"""Points :math:`z(i / \mathrm{count})`, ``i = 0, ..., count - 1``."""
        return self.sample_at(np.arange(count) / count)

    def sample_at(self, fractions):
        r"""Points :math:`z(s) = \phi^{sT}(p)` for fractions ``s`` of the period."""
        fractions = np.asarray(fractions, dtype=float)
        starts = np.broadcast_to(self.p.coords, fractions.shape + self.p.coords.shape)
        return flow_points(self.triad, starts, self.period * fractions)

    def shifted(self, fraction):
        """The same orbit with the base point moved to ``z(fraction)``."""
        point = TriadPoint(self.sample_at(fraction), self.triad.triad_id)
        return _closed_orbit(self.triad, point, self.period, self.Nt)


@dataclasses.dataclass(frozen=True)
class NondegeneracyReport:
    nondegenerate: bool
    margin: float
    floquet: np.ndarray
    threshold: float


def _return_data(triad, point, period):
    end, derivative = flow_points(triad, point, period, variational=True)
    small = triad.xi_coframe(point) @ derivative @ triad.unitary_frame(point)
    return end, small


def _closed_orbit(triad, point, period, count):
    end, return_map = _return_data(triad, point.coords, period)
    closing = np.linalg.norm(end - point.coords)
    det = np.linalg.det(return_map)
    if abs(det - 1.0) > config.TOLERANCES["nondegeneracy"]:
        raise errors.IntegrationError(
            f"The return map has determinant {det:.12f}, expected one."
        )
    logger.debug("Orbit of period %.12g closes up to %.3e", period, closing)
    fractions = np.arange(count) / count
    starts = np.broadcast_to(point.coords, (count, triad.dim))
    return ClosedOrbit(
        triad=triad,
        p=point,
        period=float(period),
        samples=flow_points(triad, starts, period * fractions),
        return_map=return_map,
        floquet=np.linalg.eigvals(return_map),
    )


def find_closed_orbit(triad: ContactTriad, seed_point, T_guess, samples=64):
    r"""Locate a closed Reeb orbit through the section at ``seed_point``.

    Newton iteration in the unknowns :math:`(x, T)` on
    :math:`\phi^T(x) - x = 0`, with the phase condition
    :math:`g(X_\lambda(x_0), x - x_0) = 0` fixing the Poincaré section and the
    linearized constraint of the triad. Linear systems are solved in the least
    squares sense, the Jacobian :math:`d\phi^T` comes from the variational equation.

    Raises
    ------
    ValueError
        If ``T_guess`` is not positive.
    NoOrbitFoundError
        If the iteration does not converge; ``last_iterate`` holds the last
        ``(point, period)``.
    """
    if not T_guess > 0:
        raise ValueError("The period guess has to be positive.")
    if isinstance(seed_point, TriadPoint):
        seed_point = seed_point.coords
    x0 = np.asarray(seed_point, dtype=float)
    x0 = triad.project(x0)
    reeb0 = triad.reeb(x0)
    phase = triad.metric_matrix(x0) @ reeb0
    tolerance = config.INTEGRATION["newton_tol"]
    x, period = x0.copy(), float(T_guess)
    for iteration in range(config.INTEGRATION["newton_max_iters"]):
        end, derivative = flow_points(triad, x, period, variational=True)
        residual = end - x
        size = float(np.linalg.norm(residual))
        logger.debug("Newton iteration %d: period %.12g, residual %.3e", iteration, period, size)
        if size <= tolerance:
            orbit = _closed_orbit(triad, TriadPoint(x, triad.triad_id), period, samples)
            logger.info("Closed orbit of period %.12g after %d iterations", period, iteration)
            return orbit
        dim = triad.dim
        rows = [
            np.hstack([derivative - np.eye(dim), triad.reeb(end)[:, None]]),
            np.hstack([phase, 0.0])[None, :],
        ]
        rhs = [-residual, [-phase @ (x - x0)]]
        gradient = triad.constraint_gradient(x)
        if np.any(gradient):
            rows.append(np.hstack([gradient, 0.0])[None, :])
            rhs.append([-triad.constraint_value(x)])
        step = np.linalg.lstsq(np.vstack(rows), np.concatenate(rhs), rcond=None)[0]
        x = triad.project(x + step[:-1])
        period = period + step[-1]
        if not (np.all(np.isfinite(x)) and period > 1e-8):
            break
    raise errors.NoOrbitFoundError(
        "The closed-orbit Newton iteration did not converge.", last_iterate=(x, period)
    )


def coordinate_orbit(triad, index=1, samples=64):
    """The closed orbit along a coordinate circle of an ellipsoid."""
    point = TriadPoint(triad.orbit_point(index), triad.triad_id)
    return _closed_orbit(triad, point, triad.orbit_period(index), samples)


def nondegeneracy(orbit: ClosedOrbit, threshold=None) -> NondegeneracyReport:
    r"""Distance of the Floquet multipliers from one.

    The orbit is nondegenerate if :math:`\min|\mu - 1|` exceeds ``threshold``.
    """
    threshold = config.TOLERANCES["nondegeneracy"] if threshold is None else threshold
    margin = float(np.min(np.abs(orbit.floquet - 1.0)))
    return NondegeneracyReport(
        nondegenerate=margin > threshold,
        margin=margin,
        floquet=orbit.floquet,
        threshold=threshold,
    )
