"""Residual minimization for contact instantons with Dirichlet boundary loops."""

import dataclasses
import logging
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from contactinstanton import config, errors
from contactinstanton.cylfield import EnergyReport, MapField, energies

from ._functional import functional, linearize

__all__ = ["SolveConfig", "SolveResult", "HistoryEntry", "solve", "write_history"]

logger = logging.getLogger(__name__)

METHODS = ("gauss-newton", "gradient-descent")

_ARMIJO_SHRINK = 0.5
_ARMIJO_FRACTION = 1e-4
_MAX_HALVINGS = 60
_DAMPING = 1e-10
_STATIONARY = 1e-10


@dataclasses.dataclass(frozen=True)
class SolveConfig:
    """Settings of a single solve.

    ``bc`` holds the Dirichlet loops ``(loop_0, loop_L)`` of shape ``(Nt, n)``; if it is
    ``None`` the boundary rows of the initial field are kept. ``fd_step`` is the
    pointwise difference step of the Jacobian, ``seed`` the seed recorded with the run.
    """

    tol_residual: float = 1e-8
    max_iters: int = 50
    method: str = "gauss-newton"
    bc: Optional[Tuple[np.ndarray, np.ndarray]] = None
    fd_step: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise ValueError("The residual tolerance has to be positive.")
        if int(self.max_iters) < 0:
            raise ValueError("The iteration budget cannot be negative.")
        if self.method not in METHODS:
            raise ValueError(f"Unknown method {self.method!r}; choose from {METHODS}.")
        if self.fd_step is not None and not self.fd_step > 0:
            raise ValueError("The difference step has to be positive.")
        if int(self.seed) < 0:
            raise ValueError("Seeds must be nonnegative.")


class HistoryEntry(NamedTuple):
    iter: int
    F: float
    grad_norm: float
    res_dbar: float
    res_closed: float


@dataclasses.dataclass(frozen=True)
class SolveResult:
    r"""Final field, iteration history and energy report of a solve.

    If ``converged``, :math:`\mathrm{res}_{\bar\partial}^2 + \mathrm{res}_{closed}^2`
    is at most the squared tolerance.
    """

    w: MapField
    history: List[HistoryEntry]
    converged: bool
    report: EnergyReport
    message: str

    @property
    def iterations(self):
        return self.history[-1].iter


def _check_boundary(w0, bc):
    if bc is None:
        return
    loop_start, loop_end = (np.asarray(loop, dtype=float) for loop in bc)
    expected = (w0.grid.Nt, w0.triad.dim)
    if loop_start.shape != expected or loop_end.shape != expected:
        raise ValueError(f"Boundary loops need shape {expected}.")
    for loop, row in ((loop_start, w0.nodes[0]), (loop_end, w0.nodes[-1])):
        scale = 1.0 + np.max(np.abs(loop))
        if np.max(np.abs(loop - row)) > config.TOLERANCES["invariant"] * scale:
            raise ValueError("The initial field does not satisfy the boundary data.")


def _interior_columns(grid):
    nodes = np.arange(grid.Nt, grid.size - grid.Nt)
    return (3 * nodes[:, None] + np.arange(3)).ravel()


def _converged(lin, tol):
    bound = tol / np.sqrt(2.0)
    return lin.res_dbar <= bound and lin.res_closed <= bound


def _entry(iteration, lin, reduced_gradient):
    return HistoryEntry(
        iter=iteration,
        F=lin.value,
        grad_norm=float(np.linalg.norm(reduced_gradient)),
        res_dbar=lin.res_dbar,
        res_closed=lin.res_closed,
    )


def _update(w, frames, interior, coefficients):
    full = np.zeros(w.grid.size * 3)
    full[interior] = coefficients
    displacement = np.einsum(
        "...im,...m->...i", frames, full.reshape(w.grid.shape + (3,))
    )
    nodes = w.triad.project(w.nodes + displacement)
    nodes[[0, -1]] = w.nodes[[0, -1]]
    return w.with_nodes(nodes)


def _gauss_newton_direction(jacobian, reduced_gradient):
    normal = (jacobian.T @ jacobian).tocsr()
    diagonal = normal.diagonal()
    damping = _DAMPING * max(float(np.max(diagonal)), np.finfo(float).tiny)
    normal = normal + damping * scipy.sparse.identity(normal.shape[0], format="csr")
    preconditioner = scipy.sparse.diags(1.0 / (diagonal + damping))
    direction, info = scipy.sparse.linalg.cg(
        normal,
        -reduced_gradient,
        atol=0.0,
        maxiter=10 * normal.shape[0],
        M=preconditioner,
    )
    if info != 0:
        logger.debug("CG stopped before its tolerance (info %d)", info)
    return direction


def _line_search(w, lin, interior, direction, reduced_gradient, initial):
    """Armijo backtracking; returns ``(field, step)`` or ``None``."""
    slope = float(reduced_gradient @ direction)
    if not slope < 0:
        return None
    value = lin.value
    step = initial
    for _ in range(_MAX_HALVINGS):
        candidate = _update(w, lin.frames, interior, step * direction)
        if functional(candidate) <= value + _ARMIJO_FRACTION * step * slope:
            return candidate, step
        step *= _ARMIJO_SHRINK
    return None


def _stationary(lin, reduced_gradient, direction):
    predicted = -float(reduced_gradient @ direction)
    roundoff = (1e3 * np.finfo(float).eps) ** 2 * (1.0 + lin.derivative_scale)
    return predicted <= _STATIONARY * lin.value or lin.value <= roundoff


def _finish(w, history, converged, message):
    report = energies(w)
    logger.info(
        "%s after %d iterations: F %.3e, res_dbar %.3e, res_closed %.3e",
        message,
        history[-1].iter,
        history[-1].F,
        report.res_dbar,
        report.res_closed,
    )
    return SolveResult(
        w=w, history=history, converged=converged, report=report, message=message
    )


def solve(w0: MapField, cfg: Optional[SolveConfig] = None) -> SolveResult:
    """Minimize the instanton residual with the boundary rows of ``w0`` held fixed.

    Gauss-Newton steps solve the damped normal equations by conjugate gradients with
    a diagonal preconditioner; every step is globalized by Armijo backtracking, with
    the steepest descent direction as fallback. Nodes are projected back onto the
    triad after each update, so the history of ``F`` is nonincreasing.

    Returns a non-converged result if the iteration budget is exhausted or the
    iteration is stationary at a positive residual.

    Raises
    ------
    ValueError
        If ``w0`` violates the boundary data of ``cfg``.
    SolverStallError
        If the line search fails although a decrease is predicted. ``result`` holds
        the last iterate.
    """
    cfg = SolveConfig() if cfg is None else cfg
    _check_boundary(w0, cfg.bc)
    interior = _interior_columns(w0.grid)
    logger.info(
        "Solving on %r with %s (tol %.1e, seed %d)",
        w0,
        cfg.method,
        cfg.tol_residual,
        cfg.seed,
    )
    w = w0
    lin = linearize(w, cfg.fd_step)
    jacobian = lin.jacobian[:, interior]
    reduced_gradient = jacobian.T @ lin.residual
    history = [_entry(0, lin, reduced_gradient)]
    step = 1.0
    iteration = 0
    while not _converged(lin, cfg.tol_residual):
        if iteration >= cfg.max_iters:
            return _finish(w, history, False, "Iteration budget exhausted")
        iteration += 1
        if cfg.method == "gauss-newton":
            direction = _gauss_newton_direction(jacobian, reduced_gradient)
            accepted = _line_search(w, lin, interior, direction, reduced_gradient, 1.0)
        else:
            direction = None
            accepted = None
        if accepted is None:
            direction = -reduced_gradient
            initial = min(1.0, 2.0 * step) if cfg.method == "gradient-descent" else 1.0
            accepted = _line_search(w, lin, interior, direction, reduced_gradient, initial)
        if accepted is None:
            if _stationary(lin, reduced_gradient, direction):
                return _finish(w, history, False, "Stationary at a positive residual")
            result = _finish(w, history, False, "Line search failed")
            raise errors.SolverStallError(
                f"The line search failed at iteration {iteration}.", result=result
            )
        w, step = accepted
        lin = linearize(w, cfg.fd_step)
        jacobian = lin.jacobian[:, interior]
        reduced_gradient = jacobian.T @ lin.residual
        history.append(_entry(iteration, lin, reduced_gradient))
        logger.debug(
            "Iteration %d: F %.6e, step %.3e, |g| %.3e",
            iteration,
            lin.value,
            step,
            history[-1].grad_norm,
        )
    return _finish(w, history, True, "Converged")


def write_history(path, history):
    """Write the iteration history as CSV with columns iter, F, grad_norm, res_dbar, res_closed."""
    table = np.array([tuple(entry) for entry in history], dtype=float).reshape(-1, 5)
    np.savetxt(
        path,
        table,
        delimiter=",",
        header=",".join(HistoryEntry._fields),
        comments="",
        fmt=["%d"] + ["%.17g"] * 4,
    )
