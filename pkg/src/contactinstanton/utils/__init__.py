"""Utility functions."""

from ._numerics import convergence_order, exponential_tail_fit, named_generator

__all__ = ["named_generator", "convergence_order", "exponential_tail_fit"]
