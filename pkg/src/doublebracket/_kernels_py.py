"""Pure-numpy implementations of the hot kernels.

Same call surface as the compiled extension ``doublebracket._kernels``;
which one is active is decided once at import by :mod:`doublebracket.backends`.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def bracket(constants, x, y):
    """[x, y]^k = sum_ij constants[k, i, j] x^i y^j."""
    return np.einsum("kij,i,j->k", constants, x, y)


def double_bracket(constants, x, n_vec):
    """[x, [x, n]] via two bracket contractions."""
    return bracket(constants, x, bracket(constants, x, n_vec))


def brockett_rk4(constants, n_vec, l0, h, n_steps):
    """Fixed-step RK4 integration of L' = [L, [L, N]].

    Returns the (n_steps + 1, dim) array of states; no finiteness checks are
    performed here, callers inspect the result.
    """
    c = np.asarray(constants, dtype=float)
    n_vec = np.asarray(n_vec, dtype=float)
    x = np.asarray(l0, dtype=float).copy()
    states = np.empty((n_steps + 1, x.size))
    states[0] = x
    for step in range(n_steps):
        k1 = double_bracket(c, x, n_vec)
        k2 = double_bracket(c, x + 0.5 * h * k1, n_vec)
        k3 = double_bracket(c, x + 0.5 * h * k2, n_vec)
        k4 = double_bracket(c, x + h * k3, n_vec)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[step + 1] = x
    return states
