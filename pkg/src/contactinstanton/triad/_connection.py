r"""The contact triad connection.

The connection is determined in the frame :math:`(e_1, e_2 = Je_1, X_\lambda)` by

* :math:`\nabla X_\lambda = \frac12(\mathcal{L}_{X_\lambda}J)J`,
* :math:`\nabla e_1 = \alpha\,e_2 + (\ldots)X_\lambda` with the rotation form
  :math:`\alpha(e_i) = -g([e_1, e_2], e_i)` on :math:`\xi` and
  :math:`\alpha(X_\lambda) = g([X_\lambda, e_1], e_2) + \frac12 g((\mathcal{L}_{X_\lambda}J)e_2, e_2)`,
* metric compatibility for the Reeb components.

Brackets and derivatives of coefficient functions are central finite differences.
"""

import dataclasses
from typing import Callable, Dict

import numpy as np

from contactinstanton import config, errors

from ._geometry import lie_derivative_matrix
from ._models import ContactTriad, TriadPoint

__all__ = [
    "ConnectionEval",
    "AxiomReport",
    "connection_form",
    "christoffel_symbols",
    "connection_eval",
    "covariant_derivative",
    "triad_connection",
    "torsion",
    "axiom_check",
    "curvature_form",
    "curvature_pi",
    "covariant_derivative_lie_J",
]

_J0 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclasses.dataclass(frozen=True)
class ConnectionEval:
    r"""Christoffel symbols :math:`\Gamma_{ijk} = g(\nabla_{f_i} f_j, f_k)` in the frame
    :math:`f = (e_1, e_2, X_\lambda)` together with the torsion at the base point."""

    base: TriadPoint
    christoffel: np.ndarray
    torsion: Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclasses.dataclass(frozen=True)
class AxiomReport:
    """Maximal residual of each connection axiom over the sampled points."""

    residuals: Dict[str, float]
    tolerance: float

    @property
    def passed(self):
        return all(value <= self.tolerance for value in self.residuals.values())


def _step(step):
    return config.FINITE_DIFFERENCES["first_order"] if step is None else step


def _directional(field, p, v, step):
    """Central difference of ``field`` at ``p`` along ``v``."""
    forward = field(p + step * v)
    backward = field(p - step * v)
    if not (np.all(np.isfinite(forward)) and np.all(np.isfinite(backward))):
        raise errors.BoundaryError("The stencil leaves the domain of the field.")
    return (forward - backward) / (2.0 * step)


def _bracket(first, second, p, step):
    """Lie bracket of two vector fields given as callables."""
    return _directional(second, p, first(p), step) - _directional(
        first, p, second(p), step
    )


def _frame_fields(triad):
    return (
        lambda q: triad.unitary_frame(q)[..., 0],
        lambda q: triad.unitary_frame(q)[..., 1],
        triad.reeb,
    )


def _rotation_components(triad, p, step=None):
    r"""Values :math:`(\alpha(e_1), \alpha(e_2), \alpha(X_\lambda))` at ``p``."""
    step = _step(step)
    e1, e2, reeb = _frame_fields(triad)
    coframe = triad.xi_coframe(p)
    b12 = _bracket(e1, e2, p, step)
    bx1 = _bracket(reeb, e1, p, step)
    lie = lie_derivative_matrix(triad, p, step=step)
    alpha1 = -np.einsum("...i,...i->...", coframe[..., 0, :], b12)
    alpha2 = -np.einsum("...i,...i->...", coframe[..., 1, :], b12)
    alpha_reeb = np.einsum("...i,...i->...", coframe[..., 1, :], bx1) + 0.5 * lie[
        ..., 1, 1
    ]
    return np.stack([alpha1, alpha2, alpha_reeb], axis=-1)


def connection_form(triad: ContactTriad, p, v, step=None):
    r"""Rotation form :math:`\alpha(v)` with :math:`\nabla^\pi e_1 = \alpha\, e_2`."""
    p = np.asarray(p, dtype=float)
    coords = triad.frame_coordinates(p, v)
    return np.sum(coords * _rotation_components(triad, p, step), axis=-1)


def _christoffel(triad, p, step=None):
    p = np.asarray(p, dtype=float)
    alpha = _rotation_components(triad, p, step)
    lie_j = lie_derivative_matrix(triad, p, step=step) @ _J0
    gamma = np.zeros(p.shape[:-1] + (3, 3, 3))
    # nabla_{f_i} X = 1/2 (L J) f_i, zero for f_i = X
    gamma[..., :2, 2, :2] = 0.5 * np.swapaxes(lie_j, -1, -2)
    gamma[..., :, 0, 1] = alpha
    gamma[..., :, 1, 0] = -alpha
    gamma[..., :, 0, 2] = -gamma[..., :, 2, 0]
    gamma[..., :, 1, 2] = -gamma[..., :, 2, 1]
    return gamma


def christoffel_symbols(triad: ContactTriad, p, step=None):
    r"""Symbols :math:`\Gamma_{ijk} = g(\nabla_{f_i} f_j, f_k)` at every point of ``p``, shape ``(..., 3, 3, 3)``."""
    return _christoffel(triad, p, step)


def _frame_brackets(triad, p, step):
    """Frame coordinates of :math:`[f_i, f_j]`, shape ``(..., 3, 3, 3)``."""
    fields = _frame_fields(triad)
    out = np.zeros(np.shape(p)[:-1] + (3, 3, 3))
    for i in range(3):
        for j in range(i + 1, 3):
            coords = triad.frame_coordinates(
                p, _bracket(fields[i], fields[j], p, step)
            )
            out[..., i, j, :] = coords
            out[..., j, i, :] = -coords
    return out


def torsion(triad: ContactTriad, p, u, v, step=None):
    r"""Torsion :math:`T(u, v)` of the triad connection at ``p``."""
    step = _step(step)
    p = np.asarray(p, dtype=float)
    gamma = _christoffel(triad, p, step)
    frame_torsion = (
        gamma - np.swapaxes(gamma, -3, -2) - _frame_brackets(triad, p, step)
    )
    cu = triad.frame_coordinates(p, u)
    cv = triad.frame_coordinates(p, v)
    coords = np.einsum("...i,...j,...ijk->...k", cu, cv, frame_torsion)
    return np.einsum("...ik,...k->...i", triad.full_frame(p), coords)


def connection_eval(triad: ContactTriad, p, step=None) -> ConnectionEval:
    """Christoffel symbols and torsion of the triad connection at ``p``."""
    point = p if isinstance(p, TriadPoint) else TriadPoint(p, triad.triad_id)
    return ConnectionEval(
        base=point,
        christoffel=_christoffel(triad, point.coords, step),
        torsion=lambda u, v: torsion(triad, point.coords, u, v, step),
    )


def covariant_derivative(triad: ContactTriad, p, v, field, step=None):
    r"""Covariant derivative :math:`\nabla_v Y` of a vector field ``Y`` at ``p``.

    ``field`` maps points of shape ``(..., n)`` to ambient vectors; it has to be
    defined on the stencil points :math:`p \pm \epsilon v`, which for constrained
    models lie slightly off the constraint set.

    Raises
    ------
    BoundaryError
        If the field cannot be evaluated on the stencil.
    """
    step = _step(step)
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)

    def coefficients(q):
        try:
            return triad.frame_coordinates(q, field(q))
        except errors.BoundaryError:
            raise
        except (ValueError, IndexError) as err:
            raise errors.BoundaryError(str(err)) from err

    derivative = _directional(coefficients, p, v, step)
    gamma = _christoffel(triad, p, step)
    cv = triad.frame_coordinates(p, v)
    coords = derivative + np.einsum(
        "...i,...j,...ijk->...k", cv, coefficients(p), gamma
    )
    return np.einsum("...ik,...k->...i", triad.full_frame(p), coords)


triad_connection = covariant_derivative


def covariant_derivative_lie_J(triad: ContactTriad, p, v, step=None):
    r"""Frame matrix of :math:`\nabla^\pi_v(\mathcal{L}_{X_\lambda}J)`.

    Computed as :math:`D_v\hat L + \alpha(v)[J_0, \hat L]` for the frame matrix
    :math:`\hat L`; the outer difference uses the nested step.
    """
    outer = config.FINITE_DIFFERENCES["nested"] if step is None else step
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    inner = config.FINITE_DIFFERENCES["first_order"]
    derivative = _directional(
        lambda q: lie_derivative_matrix(triad, q, step=inner), p, v, outer
    )
    lie = lie_derivative_matrix(triad, p, step=inner)
    alpha = connection_form(triad, p, v, step=inner)[..., None, None]
    return derivative + alpha * (_J0 @ lie - lie @ _J0)


def curvature_form(triad: ContactTriad, p, step=None):
    r"""Matrix :math:`d\alpha(f_i, f_j)` of the curvature of :math:`\nabla^\pi`.

    The curvature of :math:`\nabla^\pi` is :math:`d\alpha\otimes J`. The outer
    derivatives use the nested step, inner ones the first-order step.
    """
    outer = config.FINITE_DIFFERENCES["nested"] if step is None else step
    inner = config.FINITE_DIFFERENCES["first_order"]
    p = np.asarray(p, dtype=float)
    fields = _frame_fields(triad)
    derivatives = np.stack(
        [
            _directional(
                lambda q: _rotation_components(triad, q, inner),
                p,
                fields[i](p),
                outer,
            )
            for i in range(3)
        ],
        axis=-2,
    )
    alpha = _rotation_components(triad, p, inner)
    brackets = _frame_brackets(triad, p, inner)
    return (
        derivatives
        - np.swapaxes(derivatives, -1, -2)
        - np.einsum("...ijk,...k->...ij", brackets, alpha)
    )


def curvature_pi(triad: ContactTriad, p, u, v, step=None):
    r"""Curvature :math:`R^\pi(u, v)` of :math:`\nabla^\pi` as an ambient endomorphism."""
    p = np.asarray(p, dtype=float)
    two_form = curvature_form(triad, p, step)
    value = np.einsum(
        "...i,...ij,...j->...",
        triad.frame_coordinates(p, u),
        two_form,
        triad.frame_coordinates(p, v),
    )
    return value[..., None, None] * triad.cstruct(p)


def axiom_check(triad: ContactTriad, sample_points, tolerance=1e-6, rng=None, step=None):
    r"""Residuals of the axioms of the triad connection at ``sample_points``.

    The axioms are evaluated on vector fields that are not frame fields (projections
    of constant ambient vectors), so that every residual carries finite-difference
    error:

    * ``metric``: :math:`Z\langle Y, W\rangle - \langle\nabla_Z Y, W\rangle - \langle Y, \nabla_Z W\rangle`
    * ``torsion_reeb``: :math:`T(X_\lambda, Y)`
    * ``reeb_reeb``: :math:`\nabla_{X_\lambda}X_\lambda`
    * ``reeb_xi``: :math:`\lambda(\nabla_Y X_\lambda)` for :math:`Y\in\xi`
    * ``hermitian``: :math:`\pi\nabla_Z(JY) - J\nabla_Z Y`
    * ``torsion_xi``: :math:`T^\pi(JY, Y)`
    * ``holomorphic_reeb``: :math:`\nabla_{JY}X_\lambda + J\nabla_Y X_\lambda`
    * ``reeb_derivative``: :math:`\nabla_Y X_\lambda - \frac12(\mathcal{L}_{X_\lambda}J)JY`
    * ``lambda_torsion``: :math:`\lambda(T(Y, W)) - d\lambda(Y, W)` for :math:`Y, W\in\xi`
    """
    step = _step(step)
    rng = np.random.default_rng(0) if rng is None else rng
    p = np.asarray(sample_points, dtype=float)
    consts = [rng.standard_normal(p.shape) for _ in range(3)]

    def apply(matrix, vec):
        return np.einsum("...ij,...j->...i", matrix, vec)

    def tangent_field(const):
        return lambda q: apply(triad.tangent_projector(q), const)

    def xi_field(const):
        return lambda q: apply(triad.xi_projector(q), const)

    def j_field(field):
        return lambda q: apply(triad.cstruct(q), field(q))

    def norm(vec):
        return np.sqrt(
            np.maximum(np.einsum("...i,...ij,...j->...", vec, triad.metric_matrix(p), vec), 0)
        )

    def metric(q, u, v):
        return np.einsum("...i,...ij,...j->...", u, triad.metric_matrix(q), v)

    def nabla(v, field):
        return covariant_derivative(triad, p, v, field, step)

    def torsion_of_fields(first, second):
        return (
            nabla(first(p), second)
            - nabla(second(p), first)
            - _bracket(first, second, p, step)
        )

    y_tan, w_tan = tangent_field(consts[0]), tangent_field(consts[1])
    z_vec = tangent_field(consts[2])(p)
    y_xi, w_xi = xi_field(consts[0]), xi_field(consts[1])
    reeb = triad.reeb
    cstruct = triad.cstruct(p)
    lie_j = _lie_ambient(triad, p, step)

    metric_derivative = _directional(
        lambda q: metric(q, y_tan(q), w_tan(q)), p, z_vec, step
    )
    residuals = {
        "metric": np.abs(
            metric_derivative
            - metric(p, nabla(z_vec, y_tan), w_tan(p))
            - metric(p, y_tan(p), nabla(z_vec, w_tan))
        ),
        "torsion_reeb": norm(torsion_of_fields(reeb, y_tan)),
        "reeb_reeb": norm(nabla(reeb(p), reeb)),
        "reeb_xi": np.abs(np.sum(triad.lam(p) * nabla(y_xi(p), reeb), axis=-1)),
        "hermitian": norm(
            apply(triad.xi_projector(p), nabla(z_vec, j_field(y_xi)))
            - apply(cstruct, nabla(z_vec, y_xi))
        ),
        "torsion_xi": norm(
            apply(triad.xi_projector(p), torsion_of_fields(j_field(y_xi), y_xi))
        ),
        "holomorphic_reeb": norm(
            nabla(apply(cstruct, y_xi(p)), reeb) + apply(cstruct, nabla(y_xi(p), reeb))
        ),
        "reeb_derivative": norm(
            nabla(y_xi(p), reeb) - 0.5 * apply(lie_j @ cstruct, y_xi(p))
        ),
        "lambda_torsion": np.abs(
            np.sum(triad.lam(p) * torsion_of_fields(y_xi, w_xi), axis=-1)
            - np.einsum("...i,...ij,...j->...", y_xi(p), triad.dlam(p), w_xi(p))
        ),
    }
    return AxiomReport(
        residuals={key: float(np.max(value)) for key, value in residuals.items()},
        tolerance=tolerance,
    )


def _lie_ambient(triad, p, step):
    small = lie_derivative_matrix(triad, p, step=step)
    return triad.unitary_frame(p) @ small @ triad.xi_coframe(p)
