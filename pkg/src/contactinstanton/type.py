"""Types."""

from typing import Tuple, Union

import numpy as np

__all__ = ["ArrayLike", "FloatArray", "DomainInterval"]

ArrayLike = Union[np.ndarray, list, tuple, float]

FloatArray = np.ndarray
"""Float arrays whose last axis holds ambient coordinates."""

DomainInterval = Tuple[float, float]
"""A closed interval [tau_start, tau_end] of a cylinder, times the full circle."""
