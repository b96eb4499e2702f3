r"""Decay of the linear evolution :math:`\partial_\tau\eta + A_z\eta = 0` on the half-cylinder."""

import dataclasses

import numpy as np
import scipy.special
import scipy.stats

from contactinstanton import errors, utils
from contactinstanton.reeb import SpectrumResult, near_kernel_threshold

__all__ = ["LinearEvolution", "linear_evolution_rate"]

_ROUNDOFF = 1e-13


@dataclasses.dataclass(frozen=True)
class LinearEvolution:
    """Fitted decay rate of the evolution next to the expected rate, the positive gap.

    A negative ``rate`` means the section grows. Norms are stored as logarithms.
    """

    rate: float
    r2: float
    expected: float
    horizon: float
    tau: np.ndarray
    log_norms: np.ndarray


def linear_evolution_rate(
    spectrum: SpectrumResult, eta0=None, horizon=None, seed=0, samples=201
) -> LinearEvolution:
    r"""Evolve ``eta0`` by :math:`e^{-\tau A_z}` and fit the decay of its norm over the tail.

    The evolution is exact in the eigenbasis of the assembled matrix; modal
    coefficients at roundoff level relative to the largest one are dropped, since the
    steepest modes would otherwise amplify them. Without ``eta0`` a random section of
    the stable subspace (positive eigenvalues) is drawn from ``seed``. ``horizon``
    defaults to ten over the positive gap; the fit uses the second half of
    ``[0, horizon]``.

    Raises
    ------
    DegenerateSpectrumError
        If the gap vanishes or no eigenvalue is positive.
    """
    eigenvalues, eigenvectors = spectrum.eigenvalues, spectrum.eigenvectors
    positive_gap = spectrum.positive_gap
    if spectrum.gap <= near_kernel_threshold(spectrum.Nt) or not positive_gap > 0:
        raise errors.DegenerateSpectrumError(
            f"The spectrum has no positive gap (gap {spectrum.gap:.3e})."
        )
    if eta0 is None:
        rng = utils.named_generator(seed, "linear-evolution")
        stable = eigenvalues > 0
        eta0 = eigenvectors[:, stable] @ rng.standard_normal(np.count_nonzero(stable))
    eta0 = np.asarray(eta0, dtype=float)
    if eta0.shape != eigenvalues.shape:
        raise ValueError(f"eta0 needs shape {eigenvalues.shape}.")
    horizon = 10.0 / positive_gap if horizon is None else float(horizon)
    if not horizon > 0:
        raise ValueError("The horizon has to be positive.")

    coefficients = eigenvectors.T @ eta0
    size = np.max(np.abs(coefficients))
    if size == 0:
        raise ValueError("eta0 vanishes.")
    keep = np.abs(coefficients) > _ROUNDOFF * size
    tau = np.linspace(0.0, horizon, samples)
    exponents = -2.0 * np.outer(tau, eigenvalues[keep]) + 2.0 * np.log(
        np.abs(coefficients[keep])
    )
    log_norms = 0.5 * (scipy.special.logsumexp(exponents, axis=1) - np.log(spectrum.Nt))
    tail = tau >= 0.5 * horizon
    fit = scipy.stats.linregress(tau[tail], log_norms[tail])
    return LinearEvolution(
        rate=-float(fit.slope),
        r2=float(fit.rvalue ** 2),
        expected=float(positive_gap),
        horizon=horizon,
        tau=tau,
        log_norms=log_norms,
    )
