"""Pointwise geometry of a contact triad."""

import dataclasses

import numpy as np

from contactinstanton import config, errors

from . import _flow
from ._models import ContactTriad, Tangent, TriadPoint, polar_complex_structure

__all__ = [
    "XiFrame",
    "project_xi",
    "triad_metric",
    "compatibilize",
    "xi_frame",
    "lie_derivative_matrix",
    "lie_derivative_J",
    "check_triad_invariants",
]


@dataclasses.dataclass(frozen=True)
class XiFrame:
    r"""Unitary frame :math:`(e_1, e_2 = Je_1)` of :math:`\xi` at a point."""

    base: TriadPoint
    e1: Tangent
    e2: Tangent


def _unwrap(p, *vectors):
    """Ambient arrays of a point and vectors, checking base points of tangents."""
    coords = p.coords if isinstance(p, TriadPoint) else np.asarray(p, dtype=float)
    arrays = []
    for vector in vectors:
        if isinstance(vector, Tangent):
            if isinstance(p, TriadPoint) and (
                vector.base.triad_id != p.triad_id
                or not np.array_equal(vector.base.coords, coords)
            ):
                raise errors.ContractViolationError(
                    "The tangent vector is based at a different point."
                )
            arrays.append(vector.vec)
        else:
            arrays.append(np.asarray(vector, dtype=float))
    return coords, arrays


def project_xi(triad: ContactTriad, p, v):
    r"""Project onto the contact planes, :math:`v - \lambda(v)X_\lambda(p)`.

    Accepts a :class:`Tangent` (returning one) or plain ambient arrays.

    Examples
    --------
    >>> from contactinstanton.triad import FlatContactTriad
    >>> project_xi(FlatContactTriad(), [1.0, 2.0, 3.0], [1.0, 0.0, 0.0])
    array([1., 0., 2.])
    """
    coords, (vec,) = _unwrap(p, v)
    lam_v = np.sum(triad.lam(coords) * vec, axis=-1)
    projected = vec - lam_v[..., None] * triad.reeb(coords)
    if isinstance(v, Tangent):
        return Tangent(base=v.base, vec=projected)
    return projected


def triad_metric(triad: ContactTriad, p, u, v):
    r"""Triad metric :math:`d\lambda(\pi u, J\pi v) + \lambda(u)\lambda(v)`."""
    coords, (uvec, vvec) = _unwrap(p, u, v)
    return np.einsum("...i,...ij,...j->...", uvec, triad.metric_matrix(coords), vvec)


def compatibilize(triad: ContactTriad, p, h):
    r"""Complex structure on :math:`\xi_p` compatible with :math:`d\lambda`, built from ``h``.

    ``h`` is an ambient symmetric matrix (or a stack of them) whose restriction to
    :math:`\xi_p` is positive definite. Defining :math:`A` by
    :math:`d\lambda(u, v) = h(Au, v)`, the result is the polar part
    :math:`A(-A^2)^{-1/2}`, returned as an ambient matrix extended by zero along
    :math:`X_\lambda` and the normal.

    Raises
    ------
    SingularFormError
        If ``h`` is degenerate on :math:`\xi_p`.
    """
    coords, (hmat,) = _unwrap(p, h)
    basis = triad.xi_basis(coords)
    basis_t = np.swapaxes(basis, -1, -2)
    small = polar_complex_structure(
        basis_t @ hmat @ basis, basis_t @ triad.dlam(coords) @ basis
    )
    return basis @ small @ basis_t @ triad.xi_projector(coords)


def xi_frame(triad: ContactTriad, p) -> XiFrame:
    """Unitary frame of the contact plane at a single point."""
    point = p if isinstance(p, TriadPoint) else TriadPoint(p, triad.triad_id)
    frame = triad.unitary_frame(point.coords)
    return XiFrame(
        base=point,
        e1=Tangent(base=point, vec=frame[..., 0]),
        e2=Tangent(base=point, vec=frame[..., 1]),
    )


def lie_derivative_matrix(triad: ContactTriad, p, use_analytic=True, step=None):
    r"""Matrix of :math:`\mathcal{L}_{X_\lambda}J` in the unitary frame at ``p``.

    Uses the closed form of the triad if it has one. Otherwise differentiates the
    pull-back :math:`(\phi^s)^* J = D\phi^{-s} J(\phi^s p) D\phi^s` centrally in ``s``,
    with one RK4 step of the flow and its variational equation on each side.
    """
    coords = p.coords if isinstance(p, TriadPoint) else np.asarray(p, dtype=float)
    frame = triad.unitary_frame(coords)
    coframe = triad.xi_coframe(coords)
    ambient = triad.analytic_lie_J(coords) if use_analytic else None
    if ambient is None:
        step = config.FINITE_DIFFERENCES["first_order"] if step is None else step
        eye = np.broadcast_to(np.eye(triad.dim), coords.shape + (triad.dim,))
        pulled = []
        for sign in (1.0, -1.0):
            moved, jac = _flow.rk4_step(triad, coords, sign * step, eye.copy())
            pulled.append(np.linalg.solve(jac, triad.cstruct(moved) @ jac))
        ambient = (pulled[0] - pulled[1]) / (2.0 * step)
    return coframe @ ambient @ frame


def lie_derivative_J(triad: ContactTriad, p, use_analytic=True, step=None):
    r"""Ambient endomorphism :math:`\mathcal{L}_{X_\lambda}J` on :math:`\xi_p`, zero on
    :math:`X_\lambda`."""
    coords = p.coords if isinstance(p, TriadPoint) else np.asarray(p, dtype=float)
    small = lie_derivative_matrix(triad, coords, use_analytic=use_analytic, step=step)
    return triad.unitary_frame(coords) @ small @ triad.xi_coframe(coords)


def check_triad_invariants(triad: ContactTriad, points, rng, tolerance=None):
    r"""Maximal violations of the defining identities of a triad at ``points``.

    Checks :math:`\lambda(X_\lambda) = 1`, :math:`d\lambda(X_\lambda, \cdot) = 0`,
    :math:`J^2 = -1 + X_\lambda\otimes\lambda`, compatibility and
    :math:`J`-invariance of :math:`d\lambda` on random tangent vectors.

    Returns
    -------
    residuals : dict
        Maximal residual per identity, and ``"taming"`` holding the smallest value of
        :math:`d\lambda(v, Jv)` over unit :math:`v\in\xi`.
    passed : bool
    """
    tolerance = config.TOLERANCES["invariant"] if tolerance is None else tolerance
    points = np.asarray(points, dtype=float)
    proj = triad.tangent_projector(points)
    u = np.einsum("...ij,...j->...i", proj, rng.standard_normal(points.shape))
    v = np.einsum("...ij,...j->...i", proj, rng.standard_normal(points.shape))
    lam, omega, reeb, cstruct = (
        triad.lam(points),
        triad.dlam(points),
        triad.reeb(points),
        triad.cstruct(points),
    )
    xi_u = project_xi(triad, points, u)
    xi_v = project_xi(triad, points, v)
    xi_u = xi_u / np.linalg.norm(xi_u, axis=-1, keepdims=True)

    def apply(matrix, vec):
        return np.einsum("...ij,...j->...i", matrix, vec)

    def form(vec1, vec2):
        return np.einsum("...i,...ij,...j->...", vec1, omega, vec2)

    lam_u = np.sum(lam * u, axis=-1)
    residuals = {
        "reeb_normalization": np.max(np.abs(np.sum(lam * reeb, axis=-1) - 1.0)),
        "reeb_kernel": np.max(np.abs(form(reeb, u))),
        "complex_square": np.max(
            np.linalg.norm(
                apply(cstruct, apply(cstruct, u)) + u - lam_u[..., None] * reeb, axis=-1
            )
        ),
        "form_invariance": np.max(
            np.abs(form(apply(cstruct, xi_u), apply(cstruct, xi_v)) - form(xi_u, xi_v))
        ),
    }
    taming = float(np.min(form(xi_u, apply(cstruct, xi_u))))
    passed = all(value <= tolerance for value in residuals.values()) and taming > 0
    residuals = {key: float(value) for key, value in residuals.items()}
    residuals["taming"] = taming
    return residuals, passed
