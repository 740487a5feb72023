# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: structure-constant contractions and the Brockett
RK4 loop.  Mirrors doublebracket._kernels_py."""

import numpy as np

BACKEND = "compiled"


cdef void _bracket(const double[:, :, ::1] c, const double[::1] x,
                   const double[::1] y, double[::1] out) noexcept nogil:
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t k, i, j
    cdef double acc, xi
    for k in range(n):
        acc = 0.0
        for i in range(n):
            xi = x[i]
            if xi == 0.0:
                continue
            for j in range(n):
                acc += c[k, i, j] * xi * y[j]
        out[k] = acc


cdef void _double_bracket(const double[:, :, ::1] c, const double[::1] x,
                          const double[::1] n_vec, double[::1] tmp,
                          double[::1] out) noexcept nogil:
    _bracket(c, x, n_vec, tmp)
    _bracket(c, x, tmp, out)


def bracket(constants, x, y):
    """[x, y]^k = sum_ij constants[k, i, j] x^i y^j."""
    c = np.ascontiguousarray(constants, dtype=np.float64)
    xv = np.ascontiguousarray(x, dtype=np.float64)
    yv = np.ascontiguousarray(y, dtype=np.float64)
    out = np.empty(c.shape[0], dtype=np.float64)
    _bracket(c, xv, yv, out)
    return out


def double_bracket(constants, x, n_vec):
    """[x, [x, n]] via two bracket contractions."""
    c = np.ascontiguousarray(constants, dtype=np.float64)
    xv = np.ascontiguousarray(x, dtype=np.float64)
    nv = np.ascontiguousarray(n_vec, dtype=np.float64)
    tmp = np.empty(c.shape[0], dtype=np.float64)
    out = np.empty(c.shape[0], dtype=np.float64)
    _double_bracket(c, xv, nv, tmp, out)
    return out


def brockett_rk4(constants, n_vec, l0, double h, Py_ssize_t n_steps):
    """Fixed-step RK4 integration of L' = [L, [L, N]].

    Returns the (n_steps + 1, dim) state array; finiteness is checked by the
    caller.
    """
    c_arr = np.ascontiguousarray(constants, dtype=np.float64)
    n_arr = np.ascontiguousarray(n_vec, dtype=np.float64)
    x_arr = np.array(l0, dtype=np.float64)
    cdef Py_ssize_t dim = x_arr.shape[0]
    states_arr = np.empty((n_steps + 1, dim), dtype=np.float64)

    cdef const double[:, :, ::1] c = c_arr
    cdef const double[::1] nv = n_arr
    cdef double[:, ::1] states = states_arr
    cdef double[::1] x = x_arr
    cdef double[::1] tmp = np.empty(dim, dtype=np.float64)
    cdef double[::1] stage = np.empty(dim, dtype=np.float64)
    cdef double[::1] k1 = np.empty(dim, dtype=np.float64)
    cdef double[::1] k2 = np.empty(dim, dtype=np.float64)
    cdef double[::1] k3 = np.empty(dim, dtype=np.float64)
    cdef double[::1] k4 = np.empty(dim, dtype=np.float64)
    cdef Py_ssize_t step, i

    with nogil:
        for i in range(dim):
            states[0, i] = x[i]
        for step in range(n_steps):
            _double_bracket(c, x, nv, tmp, k1)
            for i in range(dim):
                stage[i] = x[i] + 0.5 * h * k1[i]
            _double_bracket(c, stage, nv, tmp, k2)
            for i in range(dim):
                stage[i] = x[i] + 0.5 * h * k2[i]
            _double_bracket(c, stage, nv, tmp, k3)
            for i in range(dim):
                stage[i] = x[i] + h * k3[i]
            _double_bracket(c, stage, nv, tmp, k4)
            for i in range(dim):
                x[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
                states[step + 1, i] = x[i]
    return states_arr
