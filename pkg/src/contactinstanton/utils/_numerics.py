"""Numerical helpers shared by the analysis modules."""

import zlib

import numpy as np
import scipy.stats

from contactinstanton.type import ArrayLike


def named_generator(seed, stream=""):
    """Random generator for a named stream derived from a single seed.

    Uses the counter-based Philox bit generator keyed by ``seed`` and a CRC32 hash of
    ``stream``, so every consumer draws from an independent but reproducible stream.

    Examples
    --------
    >>> a = named_generator(3, "samples").standard_normal()
    >>> b = named_generator(3, "samples").standard_normal()
    >>> a == b
    True
    """
    if int(seed) < 0:
        raise ValueError("Seeds must be nonnegative.")
    sequence = np.random.SeedSequence([int(seed), zlib.crc32(stream.encode("utf-8"))])
    return np.random.Generator(np.random.Philox(sequence))


def convergence_order(steps: ArrayLike, residuals: ArrayLike) -> float:
    r"""Observed order of convergence by least squares of :math:`\log r` on :math:`\log h`.

    Returns ``nan`` if fewer than two positive residuals are available.
    """
    steps = np.asarray(steps, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    usable = residuals > 0
    if np.count_nonzero(usable) < 2:
        return np.nan
    fit = scipy.stats.linregress(np.log(steps[usable]), np.log(residuals[usable]))
    return float(fit.slope)


def exponential_tail_fit(abscissae: ArrayLike, values: ArrayLike):
    """Fit ``values ~ C exp(-rate * abscissae)``.

    Returns
    -------
    rate, r2, log_amplitude
    """
    abscissae = np.asarray(abscissae, dtype=float)
    values = np.asarray(values, dtype=float)
    if abscissae.size < 2:
        raise ValueError("At least two samples are needed for a fit.")
    if np.any(values <= 0):
        raise ValueError("Exponential fits need positive values.")
    fit = scipy.stats.linregress(abscissae, np.log(values))
    return -float(fit.slope), float(fit.rvalue ** 2), float(fit.intercept)
