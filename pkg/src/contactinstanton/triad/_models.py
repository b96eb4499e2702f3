"""Model contact triads and the point types living on them."""

import abc
import dataclasses
import functools
from typing import ClassVar, Optional

import numpy as np

from contactinstanton import errors, utils

__all__ = [
    "TriadPoint",
    "Tangent",
    "ContactTriad",
    "FlatContactTriad",
    "EllipsoidTriad",
    "PerturbedEllipsoidTriad",
    "triad_from_id",
]

GOLDEN_RATIO = 0.5 * (1.0 + np.sqrt(5.0))

_J0 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclasses.dataclass(frozen=True)
class TriadPoint:
    """A point of a triad, stored in ambient coordinates."""

    coords: np.ndarray
    triad_id: str

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=float))


@dataclasses.dataclass(frozen=True)
class Tangent:
    """A tangent vector, stored with ambient components."""

    base: TriadPoint
    vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vec", np.asarray(self.vec, dtype=float))


class ContactTriad(abc.ABC):
    r"""A contact manifold with contact form :math:`\lambda` and compatible :math:`J`.

    Points are arrays whose last axis holds the ambient coordinates; every method is
    vectorized over the leading axes. Endomorphisms and forms are returned as ambient
    matrices of shape ``(..., n, n)``; :math:`J` is extended by :math:`JX_\lambda = 0`.
    """

    dim: ClassVar[int] = 3

    @property
    @abc.abstractmethod
    def triad_id(self) -> str:
        """Identifier that :func:`triad_from_id` maps back to this triad."""

    @abc.abstractmethod
    def lam(self, p):
        r"""Covector of :math:`\lambda` at ``p``."""

    @abc.abstractmethod
    def dlam(self, p):
        r"""Matrix :math:`\Omega` with :math:`d\lambda(u, v) = u^\top \Omega v`."""

    @abc.abstractmethod
    def reeb(self, p):
        """Reeb vector field."""

    @abc.abstractmethod
    def reeb_jacobian(self, p):
        """Ambient Jacobian of the Reeb vector field."""

    @abc.abstractmethod
    def xi_basis(self, p):
        r"""Smooth Euclidean-orthonormal basis of :math:`\xi_p`, shape ``(..., n, 2)``."""

    @abc.abstractmethod
    def cstruct(self, p):
        """Ambient matrix of the complex structure."""

    @abc.abstractmethod
    def sample_points(self, rng, count):
        """Random points of the triad."""

    def analytic_lie_J(self, p) -> Optional[np.ndarray]:
        """Closed-form Lie derivative of ``J`` along the Reeb field, if known."""
        return None

    def constraint_value(self, p):
        return np.zeros(np.shape(p)[:-1])

    def constraint_gradient(self, p):
        return np.zeros(np.shape(p))

    def project(self, p):
        return np.asarray(p, dtype=float)

    def tangent_projector(self, p):
        p = np.asarray(p, dtype=float)
        return np.broadcast_to(np.eye(self.dim), p.shape + (self.dim,)).copy()

    def xi_projector(self, p):
        r"""Projection onto :math:`\xi` along :math:`X_\lambda` and the normal."""
        p = np.asarray(p, dtype=float)
        reeb_lam = np.einsum("...i,...j->...ij", self.reeb(p), self.lam(p))
        return (np.eye(self.dim) - reeb_lam) @ self.tangent_projector(p)

    def unitary_frame(self, p):
        r"""Frame :math:`(e_1, e_2 = Je_1)` of :math:`\xi`, orthonormal for :math:`g_\xi`."""
        basis = self.xi_basis(p)
        first = basis[..., 0]
        cstruct = self.cstruct(p)
        norm = np.sqrt(_quadratic(self.dlam(p) @ cstruct, first))
        e1 = first / norm[..., None]
        e2 = np.einsum("...ij,...j->...i", cstruct, e1)
        return np.stack([e1, e2], axis=-1)

    def xi_coframe(self, p):
        r"""Rows :math:`\rho_i` with :math:`\rho_i\cdot v = g(\pi v, e_i)`, shape ``(..., 2, n)``."""
        frame = self.unitary_frame(p)
        rows = np.einsum(
            "...ij,...jk->...ki", self.dlam(p) @ self.cstruct(p), frame
        )
        return np.einsum("...ki,...ij->...kj", rows, self.tangent_projector(p))

    def full_frame(self, p):
        r"""The triad-orthonormal frame :math:`(e_1, e_2, X_\lambda)` as columns."""
        return np.concatenate([self.unitary_frame(p), self.reeb(p)[..., None]], axis=-1)

    def tangent_basis(self, p):
        return self.full_frame(p)

    def frame_coordinates(self, p, v):
        r"""Components of ``v`` against :math:`(e_1, e_2, X_\lambda)`."""
        v = np.asarray(v, dtype=float)
        xi_part = np.einsum("...ij,...j->...i", self.xi_coframe(p), v)
        reeb_part = np.einsum(
            "...i,...ij,...j->...", self.lam(p), self.tangent_projector(p), v
        )
        return np.concatenate([xi_part, reeb_part[..., None]], axis=-1)

    def metric_matrix(self, p):
        r"""Ambient matrix of :math:`g = d\lambda(\pi\cdot, J\pi\cdot) + \lambda\otimes\lambda`."""
        lam = self.lam(p)
        inner = self.dlam(p) @ self.cstruct(p) + np.einsum("...i,...j->...ij", lam, lam)
        proj = self.tangent_projector(p)
        gram = np.swapaxes(proj, -1, -2) @ inner @ proj
        return 0.5 * (gram + np.swapaxes(gram, -1, -2))

    def __str__(self):
        return self.triad_id


@dataclasses.dataclass(frozen=True)
class FlatContactTriad(ContactTriad):
    r"""Flat model :math:`\mathbb{R}^3` with :math:`\lambda = dz - y\,dx`.

    :math:`X_\lambda = \partial_z`, :math:`e_1 = \partial_x + y\partial_z`,
    :math:`e_2 = Je_1 = \partial_y`. The Reeb flow preserves the frame, so
    :math:`\mathcal{L}_{X_\lambda}J = 0`.
    """

    dim: ClassVar[int] = 3

    @property
    def triad_id(self):
        return "r3-standard"

    def lam(self, p):
        p = np.asarray(p, dtype=float)
        out = np.zeros_like(p)
        out[..., 0] = -p[..., 1]
        out[..., 2] = 1.0
        return out

    def dlam(self, p):
        omega = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        return np.broadcast_to(omega, np.shape(p)[:-1] + (3, 3)).copy()

    def reeb(self, p):
        out = np.zeros(np.shape(p), dtype=float)
        out[..., 2] = 1.0
        return out

    def reeb_jacobian(self, p):
        return np.zeros(np.shape(p) + (3,))

    def xi_basis(self, p):
        frame = self.unitary_frame(p)
        return frame / np.linalg.norm(frame, axis=-2, keepdims=True)

    def unitary_frame(self, p):
        p = np.asarray(p, dtype=float)
        frame = np.zeros(p.shape + (2,))
        frame[..., 0, 0] = 1.0
        frame[..., 2, 0] = p[..., 1]
        frame[..., 1, 1] = 1.0
        return frame

    def cstruct(self, p):
        p = np.asarray(p, dtype=float)
        out = np.zeros(p.shape + (3,))
        out[..., 0, 1] = -1.0
        out[..., 1, 0] = 1.0
        out[..., 2, 1] = -p[..., 1]
        return out

    def analytic_lie_J(self, p):
        return np.zeros(np.shape(p) + (3,))

    def sample_points(self, rng, count):
        return rng.uniform(-2.0, 2.0, size=(count, 3))


@dataclasses.dataclass(frozen=True)
class EllipsoidTriad(ContactTriad):
    r"""Ellipsoid :math:`|z_1|^2/a_1 + |z_2|^2/a_2 = 1` in :math:`\mathbb{C}^2`.

    Coordinates are ordered :math:`(x_1, y_1, x_2, y_2)` and the contact form is the
    restriction of :math:`\frac12\sum_k (x_k\,dy_k - y_k\,dx_k)`. The Reeb flow rotates
    :math:`z_k \mapsto e^{2it/a_k}z_k`; :math:`J` is the rotation by a right angle of
    the Euclidean metric on :math:`\xi`, which the flow preserves.
    """

    a1: float = 1.0
    a2: float = GOLDEN_RATIO
    dim: ClassVar[int] = 4

    def __post_init__(self):
        object.__setattr__(self, "a1", float(self.a1))
        object.__setattr__(self, "a2", float(self.a2))
        if self.a1 <= 0 or self.a2 <= 0:
            raise ValueError("Ellipsoid parameters must be positive.")

    @property
    def triad_id(self):
        return f"ellipsoid:a1={self.a1!r},a2={self.a2!r}"

    @property
    def _axes(self):
        return np.array([self.a1, self.a1, self.a2, self.a2])

    @property
    def _rotation(self):
        block = np.zeros((4, 4))
        block[:2, :2] = _J0 / self.a1
        block[2:, 2:] = _J0 / self.a2
        return block

    def hamiltonian(self, p):
        p = np.asarray(p, dtype=float)
        return np.sum(p ** 2 / self._axes, axis=-1)

    def normal(self, p):
        return 2.0 * np.asarray(p, dtype=float) / self._axes

    def constraint_value(self, p):
        return self.hamiltonian(p) - 1.0

    def constraint_gradient(self, p):
        return self.normal(p)

    def project(self, p):
        """Closest point on the ellipsoid."""
        p = np.asarray(p, dtype=float)
        axes = self._axes
        mu = np.zeros(p.shape[:-1])
        floor = -0.9 * axes.min()
        for _ in range(60):
            denom = axes + mu[..., None]
            value = np.sum(p ** 2 * axes / denom ** 2, axis=-1) - 1.0
            slope = -2.0 * np.sum(p ** 2 * axes / denom ** 3, axis=-1)
            step = value / slope
            mu = np.maximum(mu - step, floor)
            if np.all(np.abs(step) <= 1e-16 * (1.0 + np.abs(mu))):
                break
        closest = p * axes / (axes + mu[..., None])
        return closest / np.sqrt(self.hamiltonian(closest))[..., None]

    def tangent_projector(self, p):
        normal = self.normal(p)
        outer = np.einsum("...i,...j->...ij", normal, normal)
        return np.eye(4) - outer / np.sum(normal ** 2, axis=-1)[..., None, None]

    def lam(self, p):
        p = np.asarray(p, dtype=float)
        return 0.5 * np.stack([-p[..., 1], p[..., 0], -p[..., 3], p[..., 2]], axis=-1)

    def dlam(self, p):
        omega = np.zeros((4, 4))
        omega[:2, :2] = -_J0
        omega[2:, 2:] = -_J0
        return np.broadcast_to(omega, np.shape(p)[:-1] + (4, 4)).copy()

    def reeb(self, p):
        p = np.asarray(p, dtype=float)
        rotated = np.einsum("ij,...j->...i", self._rotation, p)
        return 2.0 * rotated / self.hamiltonian(p)[..., None]

    def reeb_jacobian(self, p):
        p = np.asarray(p, dtype=float)
        ham = self.hamiltonian(p)[..., None, None]
        rotated = np.einsum("ij,...j->...i", self._rotation, p)
        outer = np.einsum("...i,...j->...ij", rotated, self.normal(p))
        return 2.0 * self._rotation / ham - 2.0 * outer / ham ** 2

    def xi_basis(self, p):
        p = np.asarray(p, dtype=float)
        unit_normal = _normalize(self.normal(p))
        unit_lam = _normalize(self.lam(p))
        quaternion_j = np.stack([-p[..., 2], p[..., 3], p[..., 0], -p[..., 1]], axis=-1)
        first = (
            quaternion_j
            - np.sum(quaternion_j * unit_normal, axis=-1, keepdims=True) * unit_normal
            - np.sum(quaternion_j * unit_lam, axis=-1, keepdims=True) * unit_lam
        )
        first = _normalize(first)
        second = _cross4(unit_normal, unit_lam, first)
        return np.stack([first, second], axis=-1)

    def xi_metric(self, p):
        """Ambient metric whose restriction to the contact planes defines ``J``."""
        return np.broadcast_to(np.eye(4), np.shape(p) + (4,)).copy()

    def cstruct(self, p):
        basis = self.xi_basis(p)
        omega = self.dlam(p)
        hmat = self.xi_metric(p)
        small = polar_complex_structure(
            _restrict(hmat, basis), _restrict(omega, basis)
        )
        return basis @ small @ np.swapaxes(basis, -1, -2) @ self.xi_projector(p)

    def analytic_lie_J(self, p):
        return np.zeros(np.shape(p) + (4,))

    def sample_points(self, rng, count):
        return self.project(rng.standard_normal((count, 4)))

    def orbit_point(self, index=1):
        """Point of the ``index``-th coordinate circle."""
        point = np.zeros(4)
        if index == 1:
            point[0] = np.sqrt(self.a1)
        else:
            point[2] = np.sqrt(self.a2)
        return point

    def orbit_period(self, index=1):
        """Period of the ``index``-th coordinate circle orbit."""
        return np.pi * (self.a1 if index == 1 else self.a2)


@dataclasses.dataclass(frozen=True)
class PerturbedEllipsoidTriad(EllipsoidTriad):
    r"""Ellipsoid with a non-invariant compatible :math:`J`.

    :math:`J` is obtained by :func:`polar_complex_structure` from the metric
    :math:`h = I + \epsilon(\sin(k_1\cdot p) B_1 + \sin(k_2\cdot p + \varphi) B_2)`,
    with symmetric unit-norm :math:`B_i`, wave vectors :math:`k_i` and phase drawn from
    the ``seed``. The Reeb flow no longer preserves :math:`J`.
    """

    seed: int = 0
    epsilon: float = 0.25

    def __post_init__(self):
        super().__post_init__()
        if not 0.0 <= self.epsilon < 0.5:
            raise ValueError("The perturbation size has to lie in [0, 1/2).")

    @property
    def triad_id(self):
        triad_id = f"ellipsoid-perturbed:seed={self.seed}"
        if self.a1 != 1.0 or self.a2 != GOLDEN_RATIO:
            triad_id += f",a1={self.a1!r},a2={self.a2!r}"
        if self.epsilon != 0.25:
            triad_id += f",eps={self.epsilon!r}"
        return triad_id

    @functools.cached_property
    def _perturbation(self):
        rng = utils.named_generator(self.seed, "ellipsoid-perturbed")
        matrices = []
        for _ in range(2):
            raw = rng.standard_normal((4, 4))
            sym = raw + raw.T
            matrices.append(sym / np.linalg.norm(sym, 2))
        waves = rng.standard_normal((2, 4))
        phase = rng.uniform(0.0, 2.0 * np.pi)
        return matrices[0], matrices[1], waves, phase

    def xi_metric(self, p):
        first, second, waves, phase = self._perturbation
        p = np.asarray(p, dtype=float)
        s1 = np.sin(p @ waves[0])[..., None, None]
        s2 = np.sin(p @ waves[1] + phase)[..., None, None]
        return np.eye(4) + self.epsilon * (s1 * first + s2 * second)

    def analytic_lie_J(self, p):
        return None


def polar_complex_structure(hmat, omega):
    r"""Compatible complex structure on a plane from a metric and a symplectic form.

    Both arguments are ``(..., 2, 2)`` matrices in the same basis. With :math:`A`
    defined by :math:`\omega(u, v) = h(Au, v)`, returns :math:`A(-A^2)^{-1/2}`,
    which in two dimensions is :math:`A/\sqrt{\det A}`.
    """
    eigenvalues = np.linalg.eigvalsh(hmat)
    if np.any(eigenvalues[..., 0] <= 1e-12 * np.abs(eigenvalues[..., -1])) or np.any(
        eigenvalues[..., -1] <= 0
    ):
        raise errors.SingularFormError("The metric is not positive definite on xi.")
    endo = -np.linalg.solve(hmat, omega)
    det = np.linalg.det(endo)
    if np.any(det <= 0):
        raise errors.SingularFormError("The contact form is degenerate on xi.")
    return endo / np.sqrt(det)[..., None, None]


def triad_from_id(triad_id):
    """Build a builtin triad from its identifier.

    Examples
    --------
    >>> triad_from_id("r3-standard").triad_id
    'r3-standard'
    >>> triad_from_id("ellipsoid:a1=1,a2=2").a2
    2.0
    """
    return _triad_from_id(str(triad_id).strip())


@functools.lru_cache(maxsize=32)
def _triad_from_id(triad_id):
    name, _, arguments = triad_id.partition(":")
    try:
        params = _parse_arguments(arguments)
        if name == "r3-standard" and not params:
            return FlatContactTriad()
        if name == "ellipsoid":
            if set(params) - {"a1", "a2"}:
                return _unknown(triad_id)
            return EllipsoidTriad(
                a1=float(params.get("a1", 1.0)),
                a2=float(params.get("a2", GOLDEN_RATIO)),
            )
        if name == "ellipsoid-perturbed":
            if set(params) - {"seed", "a1", "a2", "eps"}:
                return _unknown(triad_id)
            return PerturbedEllipsoidTriad(
                seed=int(params.get("seed", 0)),
                a1=float(params.get("a1", 1.0)),
                a2=float(params.get("a2", GOLDEN_RATIO)),
                epsilon=float(params.get("eps", 0.25)),
            )
    except (TypeError, ValueError) as err:
        raise ValueError(f"Invalid triad id {triad_id!r}: {err}") from err
    return _unknown(triad_id)


def _unknown(triad_id):
    raise ValueError(f"Unknown triad id {triad_id!r}.")


def _parse_arguments(arguments):
    params = {}
    for item in filter(None, (chunk.strip() for chunk in arguments.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def _normalize(vectors):
    return vectors / np.linalg.norm(vectors, axis=-1, keepdims=True)


def _quadratic(matrix, vectors):
    return np.einsum("...i,...ij,...j->...", vectors, matrix, vectors)


def _restrict(matrix, basis):
    return np.swapaxes(basis, -1, -2) @ matrix @ basis


def _cross4(first, second, third):
    """Unit vector orthogonal to three vectors of R^4 (generalized cross product)."""
    rows = np.stack([first, second, third], axis=-2)
    components = []
    for index in range(4):
        minor = np.delete(rows, index, axis=-1)
        components.append((-1) ** (index + 3) * np.linalg.det(minor))
    return _normalize(np.stack(components, axis=-1))
