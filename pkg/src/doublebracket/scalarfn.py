"""Scalar functions with gradients.

Wraps the function specs that appear throughout the package: linear forms,
Killing pairings xi -> k(xi, N), quadratic forms and sparse polynomials all
carry analytic gradients; arbitrary callables fall back to finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch
from .numdiff import fd_gradient


@dataclass(frozen=True)
class ScalarFunction:
    dim: int
    fn: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "f"

    def value(self, x) -> float:
        x = _check(x, self.dim)
        return float(self.fn(x))

    def gradient(self, x) -> np.ndarray:
        x = _check(x, self.dim)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=float)
        return fd_gradient(self.fn, x)

    def __call__(self, x) -> float:
        return self.value(x)


def _check(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise DimensionMismatch(f"expected point of shape ({dim},), got {x.shape}")
    return x


def constant(dim: int, c: float) -> ScalarFunction:
    c = float(c)
    return ScalarFunction(dim, lambda x: c, lambda x: np.zeros(dim), name=f"const({c})")


def coordinate(dim: int, index: int) -> ScalarFunction:
    if not 0 <= index < dim:
        raise DimensionMismatch(f"coordinate index {index} out of range for dim {dim}")
    e = np.zeros(dim)
    e[index] = 1.0
    return ScalarFunction(dim, lambda x: float(x[index]), lambda x: e.copy(), name=f"x{index + 1}")


def linear(coeffs) -> ScalarFunction:
    """a . x for a fixed coefficient vector a."""
    a = np.asarray(coeffs, dtype=float)
    return ScalarFunction(a.size, lambda x: float(a @ x), lambda x: a.copy(), name="linear")


def metric_pairing(metric_matrix, n_vec) -> ScalarFunction:
    """x -> x^T M n, the pairing of x with a fixed element n under a constant
    bilinear form M (the Killing pairing when M is a Killing matrix)."""
    m = np.asarray(metric_matrix, dtype=float)
    n = np.asarray(n_vec, dtype=float)
    a = m @ n
    return ScalarFunction(n.size, lambda x: float(a @ x), lambda x: a.copy(), name="pairing")


def quadratic(q_matrix) -> ScalarFunction:
    """x -> x^T Q x with gradient (Q + Q^T) x."""
    q = np.asarray(q_matrix, dtype=float)
    qs = q + q.T
    return ScalarFunction(
        q.shape[0], lambda x: float(x @ q @ x), lambda x: qs @ x, name="quadratic"
    )


def polynomial(dim: int, monomials: Sequence[tuple[float, Sequence[int]]]) -> ScalarFunction:
    """Sparse polynomial sum_m coeff_m * prod_i x_i**e_{m,i}."""
    terms = [(float(c), np.asarray(e, dtype=int)) for c, e in monomials]
    for _, e in terms:
        if e.size != dim:
            raise DimensionMismatch(f"monomial exponents must have length {dim}")
        if np.any(e < 0):
            raise ValueError("monomial exponents must be nonnegative integers")

    def fn(x):
        return float(sum(c * np.prod(x**e) for c, e in terms))

    def grad(x):
        g = np.zeros(dim)
        for c, e in terms:
            for i in range(dim):
                if e[i] == 0:
                    continue
                de = e.copy()
                de[i] -= 1
                g[i] += c * e[i] * np.prod(x**de)
        return g

    return ScalarFunction(dim, fn, grad, name="poly")


def from_callable(dim: int, fn, grad=None, name: str = "f") -> ScalarFunction:
    return ScalarFunction(dim, fn, grad, name=name)
