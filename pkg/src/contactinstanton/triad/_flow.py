"""Runge-Kutta integration of the Reeb flow and its variational equation."""

import numpy as np

from contactinstanton.type import FloatArray


def rk4_step(triad, x: FloatArray, h, matrix=None):
    """One classical RK4 step of the Reeb flow.

    ``h`` is a scalar or an array matching the leading axes of ``x``. If ``matrix`` is
    given, the variational equation ``M' = DX(x) M`` is advanced with the same stages.
    """
    h = np.asarray(h, dtype=float)
    hx = h[..., None] if h.ndim else h
    k1 = triad.reeb(x)
    k2 = triad.reeb(x + 0.5 * hx * k1)
    k3 = triad.reeb(x + 0.5 * hx * k2)
    k4 = triad.reeb(x + hx * k3)
    x_new = x + hx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if matrix is None:
        return x_new
    hm = h[..., None, None] if h.ndim else h
    m1 = triad.reeb_jacobian(x) @ matrix
    m2 = triad.reeb_jacobian(x + 0.5 * hx * k1) @ (matrix + 0.5 * hm * m1)
    m3 = triad.reeb_jacobian(x + 0.5 * hx * k2) @ (matrix + 0.5 * hm * m2)
    m4 = triad.reeb_jacobian(x + hx * k3) @ (matrix + hm * m3)
    matrix_new = matrix + hm / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4)
    return x_new, matrix_new


def integrate(triad, x: FloatArray, time, steps, variational=False, project=True):
    """Integrate the Reeb flow over ``time`` in ``steps`` equal RK4 steps.

    Returns the end point, and the ambient derivative of the flow map if
    ``variational`` is set. Points are re-projected to the constraint after every step.
    """
    x = np.asarray(x, dtype=float)
    h = np.asarray(time, dtype=float) / steps
    matrix = None
    if variational:
        matrix = np.broadcast_to(np.eye(x.shape[-1]), x.shape + (x.shape[-1],)).copy()
    for _ in range(int(steps)):
        if variational:
            x, matrix = rk4_step(triad, x, h, matrix)
        else:
            x = rk4_step(triad, x, h)
        if project:
            x = triad.project(x)
    if variational:
        return x, matrix
    return x
