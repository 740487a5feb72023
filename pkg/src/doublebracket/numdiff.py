"""Finite-difference derivatives (4th-order central stencils).

Used as the fallback whenever analytic gradients or Jacobians are not
supplied.  The default step eps**(1/3) * (1 + |x_i|) puts the error floor
near 1e-10 .. 1e-8, which is what the chart and gradient tolerances assume.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

DEFAULT_REL_STEP = float(np.finfo(float).eps) ** (1.0 / 3.0)


def fd_gradient(f: Callable[[np.ndarray], float], x, step: float | None = None) -> np.ndarray:
    """Gradient of a scalar function by 4th-order central differences."""
    x = np.asarray(x, dtype=float)
    grad = np.empty(x.size)
    for i in range(x.size):
        h = step if step is not None else DEFAULT_REL_STEP * (1.0 + abs(x[i]))
        e = np.zeros(x.size)
        e[i] = 1.0
        grad[i] = (
            -f(x + 2.0 * h * e) + 8.0 * f(x + h * e) - 8.0 * f(x - h * e) + f(x - 2.0 * h * e)
        ) / (12.0 * h)
    return grad


def fd_jacobian(f: Callable[[np.ndarray], np.ndarray], x, step: float | None = None) -> np.ndarray:
    """Jacobian of a vector function, one 4th-order stencil per column."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        h = step if step is not None else DEFAULT_REL_STEP * (1.0 + abs(x[i]))
        e = np.zeros(x.size)
        e[i] = 1.0
        col = (
            -np.asarray(f(x + 2.0 * h * e), dtype=float)
            + 8.0 * np.asarray(f(x + h * e), dtype=float)
            - 8.0 * np.asarray(f(x - h * e), dtype=float)
            + np.asarray(f(x - 2.0 * h * e), dtype=float)
        ) / (12.0 * h)
        cols.append(col)
    return np.stack(cols, axis=-1)
