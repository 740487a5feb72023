"""Poisson bivector fields on R^n.

The central constructor is :func:`lie_poisson`, which turns a semisimple
algebra into the linear bivector
``Pi^ij(xi) = k(xi, [grad xi^i, grad xi^j])`` with gradients taken against
the Killing matrix.  Constant and polynomial bivectors cover the canonical
phase-space case and user-defined structures; the latter are only *checked*
to be Poisson pointwise (:func:`jacobi_residual`), never proven globally.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .algebra import LieAlgebra
from .errors import DegenerateKilling, DimensionMismatch
from .numdiff import fd_gradient
from .scalarfn import ScalarFunction, polynomial, quadratic

ANTISYMMETRY_ATOL = 1e-14
CASIMIR_REGISTRATION_TOL = 1e-10


@dataclass(frozen=True)
class PoissonStructure:
    """Antisymmetric bivector field with optionally registered Casimirs.

    Immutable; evaluation is pure, so concurrent use at distinct points is
    safe.  ``matrix(x)`` validates antisymmetry at every evaluated point.
    """

    dim: int
    kind: str  # lie_poisson | constant | custom
    matrix_fn: Callable[[np.ndarray], np.ndarray]
    casimirs: tuple[ScalarFunction, ...] = ()

    def matrix(self, x) -> np.ndarray:
        x = self._vec(x)
        pi = np.asarray(self.matrix_fn(x), dtype=float)
        if pi.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"bivector returned shape {pi.shape}")
        scale = 1.0 + float(np.max(np.abs(pi)))
        if float(np.max(np.abs(pi + pi.T))) > ANTISYMMETRY_ATOL * scale:
            raise ValueError(f"bivector is not antisymmetric at {x.tolist()}")
        return pi

    def bracket(self, f: ScalarFunction, g: ScalarFunction, x) -> float:
        """{f, g}(x) = df(x)^T Pi(x) dg(x).

        Summed over the strict upper triangle as Pi_ij (df_i dg_j - df_j dg_i),
        so swapping f and g negates every term exactly: the bracket is
        antisymmetric by construction, not merely up to roundoff.
        """
        x = self._vec(x)
        pi = self.matrix(x)
        df = f.gradient(x)
        dg = g.gradient(x)
        iu, ju = np.triu_indices(self.dim, k=1)
        return float(np.sum(pi[iu, ju] * (df[iu] * dg[ju] - df[ju] * dg[iu])))

    def with_casimir(self, c: ScalarFunction, check_points=None) -> "PoissonStructure":
        """Return a copy with one more registered Casimir.

        When ``check_points`` is given, the residual |Pi dC| must stay below
        1e-10 * (1 + |x|^2) at each of them.
        """
        if check_points is not None:
            for x in check_points:
                x = np.asarray(x, dtype=float)
                r = float(np.linalg.norm(self.matrix(x) @ c.gradient(x)))
                if r > CASIMIR_REGISTRATION_TOL * (1.0 + float(x @ x)):
                    raise ValueError(
                        f"candidate Casimir has residual {r:.3e} at {x.tolist()}"
                    )
        return replace(self, casimirs=self.casimirs + (c,))

    def _vec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"expected point of shape ({self.dim},), got {x.shape}")
        return x


def lie_poisson(alg: LieAlgebra, scale: float = 1.0) -> PoissonStructure:
    """Linear Lie-Poisson bivector of a semisimple algebra.

    Pi^ij(xi) = scale * k^ia k^jb C^g_ab k_gd xi^d, i.e. the coordinate form
    of k(xi, [grad xi^i, grad xi^j]).  The Killing quadratic xi -> k(xi, xi)
    is registered as a Casimir.  Raises DegenerateKilling when the Killing
    matrix is numerically singular (non-semisimple input).
    """
    k = alg.killing
    sig = np.linalg.svd(k, compute_uv=False)
    if sig.size == 0 or sig[-1] <= 1e-10 * max(sig[0], np.finfo(float).tiny):
        raise DegenerateKilling(
            f"Killing matrix of {alg.name!r} is numerically singular; "
            "the Lie-Poisson construction needs its inverse"
        )
    k_inv = np.linalg.inv(k)
    tensor = float(scale) * np.einsum("ia,jb,gab,gd->ijd", k_inv, k_inv, alg.constants, k)
    tensor = 0.5 * (tensor - tensor.transpose(1, 0, 2))  # exact antisymmetry
    tensor.setflags(write=False)

    casimir = quadratic(k)
    structure = PoissonStructure(
        dim=alg.dim,
        kind="lie_poisson",
        matrix_fn=lambda x: np.einsum("ijd,d->ij", tensor, x),
    )
    return replace(structure, casimirs=(casimir,))


def constant_structure(matrix) -> PoissonStructure:
    """Constant bivector; always satisfies the Jacobi identity."""
    pi = np.asarray(matrix, dtype=float)
    if pi.ndim != 2 or pi.shape[0] != pi.shape[1]:
        raise DimensionMismatch(f"bivector matrix must be square, got {pi.shape}")
    scale = 1.0 + float(np.max(np.abs(pi)))
    if float(np.max(np.abs(pi + pi.T))) > ANTISYMMETRY_ATOL * scale:
        raise ValueError("constant bivector must be antisymmetric")
    pi = 0.5 * (pi - pi.T)
    pi.setflags(write=False)
    return PoissonStructure(dim=pi.shape[0], kind="constant", matrix_fn=lambda x: pi)


def canonical_structure(n: int) -> PoissonStructure:
    """Canonical bivector [[0, I], [-I, 0]] on R^(2n)."""
    pi = np.zeros((2 * n, 2 * n))
    pi[:n, n:] = np.eye(n)
    pi[n:, :n] = -np.eye(n)
    return constant_structure(pi)


def polynomial_structure(dim: int, entries: dict[tuple[int, int], list]) -> PoissonStructure:
    """Bivector with polynomial entries given for the upper triangle.

    ``entries`` maps 0-based index pairs (i, j), i < j, to monomial lists
    [(coeff, exponents), ...]; the lower triangle is filled by antisymmetry.
    """
    fns: dict[tuple[int, int], ScalarFunction] = {}
    for (i, j), monomials in entries.items():
        if not (0 <= i < j < dim):
            raise DimensionMismatch(f"entry ({i}, {j}) is not strictly upper-triangular")
        fns[(i, j)] = polynomial(dim, monomials)

    def matrix_fn(x):
        pi = np.zeros((dim, dim))
        for (i, j), f in fns.items():
            v = f.value(x)
            pi[i, j] = v
            pi[j, i] = -v
        return pi

    return PoissonStructure(dim=dim, kind="custom", matrix_fn=matrix_fn)


def hamiltonian_field(structure: PoissonStructure, h: ScalarFunction):
    """Vector field X_H(x) = Pi(x) dH(x).

    For Lie-Poisson structures this equals -[xi, grad H] with the gradient
    raised by the inverse Killing matrix; that consistency is asserted by the
    test suite, not assumed here.
    """
    if h.dim != structure.dim:
        raise DimensionMismatch(
            f"function dim {h.dim} does not match structure dim {structure.dim}"
        )

    def field(x):
        return structure.matrix(x) @ h.gradient(np.asarray(x, dtype=float))

    return field


def casimir_residual(structure: PoissonStructure, c: ScalarFunction, points) -> float:
    """max over points of |Pi(x) dC(x)|_2."""
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        worst = max(worst, float(np.linalg.norm(structure.matrix(x) @ c.gradient(x))))
    return worst


def jacobi_residual(
    structure: PoissonStructure,
    point,
    f: ScalarFunction,
    g: ScalarFunction,
    h: ScalarFunction,
    fd_step: float = 1e-5,
) -> float:
    """|{f,{g,h}} + {g,{h,f}} + {h,{f,g}}| at the point.

    Inner brackets are evaluated through the bivector; the outer derivative
    uses central finite differences with the supplied step (must lie in
    [1e-7, 1e-3]).
    """
    if not 1e-7 <= fd_step <= 1e-3:
        raise ValueError(f"fd_step must lie in [1e-7, 1e-3], got {fd_step}")
    x0 = np.asarray(point, dtype=float)

    def outer(a: ScalarFunction, inner: Callable[[np.ndarray], float]) -> float:
        grad_inner = fd_gradient(inner, x0, step=fd_step)
        return float(a.gradient(x0) @ structure.matrix(x0) @ grad_inner)

    total = (
        outer(f, lambda x: structure.bracket(g, h, x))
        + outer(g, lambda x: structure.bracket(h, f, x))
        + outer(h, lambda x: structure.bracket(f, g, x))
    )
    return abs(total)
