r"""The three-interval inequality for sequences of windowed energies.

If :math:`0 < \gamma < 1/2` and :math:`x_k\le\gamma(x_{k-1} + x_{k+1})` for
:math:`1\le k\le N-1`, then

.. math:: x_k \le x_0\xi^{-k} + x_N\xi^{-(N-k)},\qquad
          \xi = \frac{1 + \sqrt{1 - 4\gamma^2}}{2\gamma}.
"""

import dataclasses
from typing import List, Optional

import numpy as np

__all__ = ["ThreeIntervalResult", "three_interval_bound", "three_interval_gamma", "growth_factor"]

_SLACK = 1e-12


@dataclasses.dataclass(frozen=True)
class ThreeIntervalResult:
    """Verdict of the hypothesis and, if it holds, the bound sequence."""

    holds: bool
    violations: List[int]
    gamma: float
    xi: float
    bound: Optional[np.ndarray]


def three_interval_gamma(rate):
    r"""The constant :math:`\gamma(c) = 1/(e^c + e^{-c})` matched to the rate ``c``.

    Sequences :math:`e^{-ck}` satisfy the hypothesis with equality for this constant.
    """
    if not rate > 0:
        raise ValueError("The rate has to be positive.")
    return 0.5 / np.cosh(rate)


def growth_factor(gamma):
    r"""The factor :math:`\xi` of the conclusion."""
    if not 0.0 < gamma < 0.5:
        raise ValueError("gamma has to lie in (0, 1/2).")
    return (1.0 + np.sqrt(1.0 - 4.0 * gamma ** 2)) / (2.0 * gamma)


def three_interval_bound(xs, gamma) -> ThreeIntervalResult:
    """Check the three-interval hypothesis on ``xs`` and evaluate the bound.

    The hypothesis is checked with a relative slack of ``1e-12``. No bound is
    returned if it fails at some interior index.

    Raises
    ------
    ValueError
        If ``gamma`` is outside ``(0, 1/2)`` or ``xs`` is not a nonnegative sequence.

    Examples
    --------
    >>> result = three_interval_bound([1.0, 0.3, 0.1, 0.02], 0.4)
    >>> result.holds, round(float(result.xi), 12)
    (True, 2.0)
    >>> round(float(result.bound[1]), 12)
    0.505
    """
    xi = growth_factor(gamma)
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size < 2:
        raise ValueError("Expected a sequence of at least two values.")
    if np.any(xs < 0) or not np.all(np.isfinite(xs)):
        raise ValueError("The sequence has to be nonnegative and finite.")
    slack = _SLACK * np.max(xs)
    neighbours = gamma * (xs[:-2] + xs[2:])
    violations = [int(k) + 1 for k in np.flatnonzero(xs[1:-1] > neighbours + slack)]
    if violations:
        return ThreeIntervalResult(False, violations, float(gamma), float(xi), None)
    last = xs.size - 1
    k = np.arange(xs.size)
    bound = xs[0] * xi ** (-k) + xs[-1] * xi ** (-(last - k))
    return ThreeIntervalResult(True, [], float(gamma), float(xi), bound)
