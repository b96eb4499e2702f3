r"""Windowed decay of :math:`\zeta = \pi\,\partial w/\partial\tau` and the limits of an instanton.

Windows are the unit intervals :math:`[k + 1, k + 2]\times S^1` inside the cylinder, so the
boundary window :math:`[0, 1]` is left out, and
:math:`x_k = \|\zeta\|^2_{L^2([k+1, k+2]\times S^1)}`. Fitted rates refer to
:math:`\|\zeta\|`, half the rate of :math:`x_k`.
"""

import dataclasses
import logging
import pathlib
from typing import List, Optional

import numpy as np
import scipy.integrate

from contactinstanton import config, errors
from contactinstanton.cylfield import (
    MapField,
    circle_integral,
    d_t,
    d_tau,
    field_geometry,
    l2_norm,
)
from contactinstanton.reeb import ClosedOrbit, flow_points
from contactinstanton.utils import exponential_tail_fit

from ._three_interval import three_interval_bound

__all__ = [
    "DecayReport",
    "ThetaReport",
    "TranslatedLimit",
    "analyze_decay",
    "theta_component",
    "limit_orbit_distance",
    "translated_limits",
    "write_decay_report",
]

logger = logging.getLogger(__name__)

_NEWTON_STEPS = 6


@dataclasses.dataclass(frozen=True)
class DecayReport:
    r"""Windowed energies of :math:`\zeta`, the three-interval verdict and the fitted rate.

    ``delta_fit`` is the decay rate of :math:`\|\zeta\|`; ``Q_limit`` and ``T_limit``
    average :math:`-\int w^*\lambda(\partial_\tau)` and :math:`\int w^*\lambda(\partial_t)`
    over the circles of the last window.
    """

    xk: np.ndarray
    gamma_used: float
    three_interval_violations: List[int]
    bound: Optional[np.ndarray]
    delta_fit: float
    r2: float
    tail: List[int]
    Q_limit: float
    T_limit: float
    asymptotic: bool
    orbit_distance: Optional[float] = None
    details: List[str] = dataclasses.field(default_factory=list)

    def rows(self):
        """Rows ``(k, xk, bound_k, hypothesis_ok)``, one per window ``[k + 1, k + 2]``.

        End windows always pass.
        """
        bound = np.full(self.xk.size, np.nan) if self.bound is None else self.bound
        violations = set(self.three_interval_violations)
        for k, (value, bound_k) in enumerate(zip(self.xk, bound)):
            yield k, float(value), float(bound_k), k not in violations


@dataclasses.dataclass(frozen=True)
class ThetaReport:
    r"""The Reeb component :math:`\theta` and the decay of its circle norms."""

    theta: np.ndarray
    T: float
    identity_residual: float
    slice_norms: np.ndarray
    rate: float
    r2: float
    constant_tail: bool


@dataclasses.dataclass(frozen=True)
class TranslatedLimit:
    """Charge, action and orbit distance on the window ``[shift, shift + 1]``."""

    shift: float
    Q: float
    T: float
    distance: Optional[float]


def _window_integrals(values, grid, starts, width=1.0):
    cumulative = scipy.integrate.cumulative_trapezoid(values, grid.tau, initial=0.0)
    starts = np.asarray(starts, dtype=float)
    return np.interp(starts + width, grid.tau, cumulative) - np.interp(
        starts, grid.tau, cumulative
    )


def _window_count(grid):
    return max(int(np.floor(grid.L + 1e-9)) - 1, 0)


def _slice_invariants(geometry):
    grid = geometry.field.grid
    charge = -circle_integral(geometry.a_tau, grid)
    action = circle_integral(geometry.a_t, grid)
    return charge, action


def _tail_limits(geometry):
    grid = geometry.field.grid
    width = min(1.0, grid.L)
    start = grid.L - width
    charge, action = _slice_invariants(geometry)
    Q_limit = float(_window_integrals(charge, grid, start, width)) / width
    T_limit = float(_window_integrals(action, grid, start, width)) / width
    return Q_limit, T_limit


def _noise_floor():
    return config.ANALYSIS["noise_floor"] * np.finfo(float).eps


def _fit_tail(abscissae, values, floor):
    """Exponential fit over the usable second half; all usable samples if it is too short."""
    usable = values > floor
    later = np.arange(values.size) >= values.size // 2
    tail = np.flatnonzero(usable & later)
    relaxed = tail.size < 3
    if relaxed:
        tail = np.flatnonzero(usable)
    if tail.size < 2:
        return np.nan, np.nan, tail, relaxed
    logs = np.log(values[tail])
    if np.ptp(logs) <= 1e-9:
        return 0.0, np.nan, tail, relaxed
    rate, r2, _ = exponential_tail_fit(abscissae[tail], values[tail])
    return rate, r2, tail, relaxed


def analyze_decay(w: MapField, orbit: Optional[ClosedOrbit] = None, gamma=None) -> DecayReport:
    """Windowed energies, the three-interval check and the decay rate of ``zeta``.

    ``gamma`` defaults to ``config.ANALYSIS["gamma"]``. Windows with energy below the
    noise floor are excluded from the fit.

    Raises
    ------
    InsufficientLengthError
        If fewer than four windows ``[k + 1, k + 2]`` fit into the cylinder.
    """
    grid = w.grid
    windows = _window_count(grid)
    if windows < 4:
        raise errors.InsufficientLengthError(
            f"A cylinder of length {grid.L} holds {windows} windows [k + 1, k + 2], "
            "at least 4 are needed."
        )
    gamma = config.ANALYSIS["gamma"] if gamma is None else gamma
    geometry = field_geometry(w)
    zeta_slices = circle_integral(np.sum(geometry.v_tau ** 2, axis=-1), grid)
    starts = np.arange(1, windows + 1, dtype=float)
    xk = np.maximum(_window_integrals(zeta_slices, grid, starts), 0.0)
    lemma = three_interval_bound(xk, gamma)

    floor = _noise_floor()
    rate, r2, tail, relaxed = _fit_tail(starts + 0.5, xk, floor)
    details = []
    asymptotic = bool(np.all(xk <= floor))
    if asymptotic:
        details.append("already asymptotic")
    elif relaxed:
        details.append("fit uses all usable windows")
    if tail.size > 1 and np.any(np.diff(xk[tail]) > 0):
        details.append("tail is not monotone")
    if not lemma.holds:
        logger.info("Three-interval hypothesis fails at windows %s", lemma.violations)

    Q_limit, T_limit = _tail_limits(geometry)
    distance = None
    if orbit is not None:
        distance = float(limit_orbit_distance(w, orbit)[-1])
    report = DecayReport(
        xk=xk,
        gamma_used=float(gamma),
        three_interval_violations=lemma.violations,
        bound=lemma.bound,
        delta_fit=0.5 * rate,
        r2=r2,
        tail=[int(k) for k in tail],
        Q_limit=Q_limit,
        T_limit=T_limit,
        asymptotic=asymptotic,
        orbit_distance=distance,
        details=details,
    )
    logger.info(
        "Decay over %d windows: delta_fit %.6g (r2 %.6f), Q %.3e, T %.9g",
        windows,
        report.delta_fit,
        r2,
        Q_limit,
        T_limit,
    )
    return report


def theta_component(w: MapField, T=None) -> ThetaReport:
    r"""The function :math:`\theta = (w^*\lambda(\partial_t) - T) + i\,w^*\lambda(\partial_\tau)`.

    On instantons :math:`\bar\partial\theta = \frac12(\theta_\tau + i\theta_t)` equals
    :math:`\frac12|\zeta|^2`; the report holds the :math:`L^2` residual of that identity
    and an exponential fit of :math:`\|\theta(\tau, \cdot)\|_{L^2(S^1)}` over the second
    half of the cylinder, or over all slices above the noise floor when fewer than three
    remain there. ``T`` defaults to the tail limit of the action. Since :math:`\theta`
    is driven by :math:`\mu`, its rate is at least :math:`\min(2\delta, 2\pi)` for a
    decay rate :math:`\delta` of :math:`\|\zeta\|`.

    Raises
    ------
    ChargeNotVanishingError
        If the tail charge exceeds ``config.ANALYSIS["charge_threshold"]``.
    """
    grid = w.grid
    geometry = field_geometry(w)
    Q_limit, T_limit = _tail_limits(geometry)
    if abs(Q_limit) > config.ANALYSIS["charge_threshold"]:
        raise errors.ChargeNotVanishingError(
            f"The tail charge {Q_limit:.3e} does not vanish."
        )
    T = T_limit if T is None else float(T)
    theta = (geometry.a_t - T) + 1j * geometry.a_tau
    dbar_theta = 0.5 * (d_tau(theta, grid) + 1j * d_t(theta, grid))
    mu = 0.5 * np.sum(geometry.v_tau ** 2, axis=-1)
    residual = l2_norm(np.abs(dbar_theta - mu) ** 2, grid)
    norms = np.sqrt(circle_integral(np.abs(theta) ** 2, grid))
    rate, r2, _, _ = _fit_tail(grid.tau, norms, np.sqrt(_noise_floor()))
    constant = bool(rate == 0.0)
    return ThetaReport(
        theta=theta,
        T=T,
        identity_residual=residual,
        slice_norms=norms,
        rate=rate,
        r2=r2,
        constant_tail=constant,
    )


def limit_orbit_distance(w: MapField, orbit: ClosedOrbit, samples=None):
    r"""Per slice, :math:`\max_t\min_\theta |w(\tau, t) - z(t - \theta)|`.

    The inner minimum is the ambient distance to the orbit: the nearest of ``samples``
    orbit points is refined by Gauss-Newton steps along the Reeb flow.
    """
    grid, triad = w.grid, w.triad
    count = max(256, 4 * grid.Nt) if samples is None else int(samples)
    orbit_points = orbit.sample(count)
    spacing = orbit.period / count
    targets = w.nodes.reshape(-1, triad.dim)
    nearest = np.concatenate(
        [
            np.argmin(
                np.sum((row[:, None, :] - orbit_points[None, :, :]) ** 2, axis=-1), axis=1
            )
            for row in w.nodes
        ]
    )
    base = orbit_points[nearest]
    offset = np.zeros(targets.shape[0])
    for _ in range(_NEWTON_STEPS):
        foot = flow_points(triad, base, offset)
        reeb = triad.reeb(foot)
        step = np.einsum("...i,...i->...", reeb, foot - targets) / np.einsum(
            "...i,...i->...", reeb, reeb
        )
        offset = np.clip(offset - step, -spacing, spacing)
    foot = flow_points(triad, base, offset)
    distance = np.linalg.norm(foot - targets, axis=-1).reshape(grid.shape)
    return np.max(distance, axis=1)


def translated_limits(w: MapField, orbit: Optional[ClosedOrbit], shifts):
    r"""Charge, action and orbit distance of the translates :math:`w(s + \tau, t)`, :math:`\tau\in[0, 1]`."""
    grid = w.grid
    shifts = np.asarray(shifts, dtype=float)
    if np.any(shifts < 0) or np.any(shifts + 1.0 > grid.L + 1e-9):
        raise ValueError("Translated windows have to lie inside the cylinder.")
    geometry = field_geometry(w)
    charge, action = _slice_invariants(geometry)
    distances = None if orbit is None else limit_orbit_distance(w, orbit)
    limits = []
    for shift in shifts:
        inside = (grid.tau >= shift - 1e-12) & (grid.tau <= shift + 1.0 + 1e-12)
        limits.append(
            TranslatedLimit(
                shift=float(shift),
                Q=float(_window_integrals(charge, grid, shift)),
                T=float(_window_integrals(action, grid, shift)),
                distance=None if distances is None else float(np.max(distances[inside])),
            )
        )
    return limits


def write_decay_report(path, report: DecayReport, spectrum=None):
    """Write the windows of ``report`` as CSV followed by a summary block.

    With a ``spectrum`` the summary compares ``delta_fit`` with its positive gap.
    """
    lines = ["k,xk,bound_k,hypothesis_ok"]
    lines += [f"{k},{x:.17g},{b:.17g},{int(ok)}" for k, x, b, ok in report.rows()]
    summary = {
        "delta_fit": report.delta_fit,
        "r2": report.r2,
        "Q_limit": report.Q_limit,
        "T_limit": report.T_limit,
        "gamma": report.gamma_used,
    }
    if spectrum is not None:
        summary["positive_gap"] = spectrum.positive_gap
        summary["gap_ratio"] = report.delta_fit / spectrum.positive_gap
    lines.append("")
    lines += [f"{key},{value:.17g}" for key, value in summary.items()]
    pathlib.Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
