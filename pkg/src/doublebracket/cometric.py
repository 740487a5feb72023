"""Metric fields, the co-metric coupling tensor and the generalized double
bracket vector field.

The coupling tensor ``D(x) = Pi(x)^T g(x) Pi(x)`` pairs the Poisson and
(pseudo-)Riemannian structures; it acts on differentials as
``D(dF, dG) = g(X_F, X_G)``.  The descent field of a function G is
``-D(x) dG(x)``, which on a semisimple algebra with its Killing metric and
Lie-Poisson bivector coincides with the iterated bracket
``[xi, [xi, grad G]]`` (the classical double bracket field).  That equality
is exercised by the test suite with both sides computed independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import LieAlgebra
from .errors import DegenerateKilling, DegenerateMetric, DimensionMismatch
from .poisson import PoissonStructure
from .scalarfn import ScalarFunction

SYMMETRY_ATOL = 1e-14
DET_FLOOR = 1e-12
RANK_CUTOFF = 1e-10


@dataclass(frozen=True)
class MetricField:
    """Pointwise symmetric, nondegenerate matrix field with fixed signature.

    Indefinite metrics are first-class citizens here (the Killing metric of a
    noncompact algebra is one); operations that need definiteness gate on
    ``signature`` instead of failing.
    """

    dim: int
    kind: str  # constant | killing | euclidean | custom
    matrix_fn: Callable[[np.ndarray], np.ndarray]
    signature: tuple[int, int]

    def matrix(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"expected point of shape ({self.dim},), got {x.shape}")
        g = np.asarray(self.matrix_fn(x), dtype=float)
        if g.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"metric returned shape {g.shape}")
        scale = 1.0 + float(np.max(np.abs(g)))
        if float(np.max(np.abs(g - g.T))) > SYMMETRY_ATOL * scale:
            raise ValueError(f"metric is not symmetric at {x.tolist()}")
        if abs(float(np.linalg.det(g))) < DET_FLOOR:
            raise DegenerateMetric(
                f"metric determinant {np.linalg.det(g):.3e} below {DET_FLOOR} at {x.tolist()}"
            )
        if matrix_signature(g) != self.signature:
            raise ValueError(
                f"metric signature changed to {matrix_signature(g)} at {x.tolist()}"
            )
        return g

    @property
    def is_positive_definite(self) -> bool:
        return self.signature == (self.dim, 0)

    @property
    def is_negative_definite(self) -> bool:
        return self.signature == (0, self.dim)


def matrix_signature(g: np.ndarray) -> tuple[int, int]:
    eig = np.linalg.eigvalsh(0.5 * (g + g.T))
    scale = max(1.0, float(np.max(np.abs(eig))))
    return int(np.sum(eig > 1e-12 * scale)), int(np.sum(eig < -1e-12 * scale))


def constant_metric(matrix, kind: str = "constant") -> MetricField:
    g = np.asarray(matrix, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatch(f"metric matrix must be square, got {g.shape}")
    g = 0.5 * (g + g.T)
    if abs(float(np.linalg.det(g))) < DET_FLOOR:
        raise DegenerateMetric("constant metric matrix is singular")
    g.setflags(write=False)
    return MetricField(
        dim=g.shape[0], kind=kind, matrix_fn=lambda x: g, signature=matrix_signature(g)
    )


def euclidean_metric(n: int) -> MetricField:
    return constant_metric(np.eye(n), kind="euclidean")


def killing_metric(alg: LieAlgebra) -> MetricField:
    """The (constant) Killing matrix of the algebra used as ambient metric."""
    return constant_metric(alg.killing, kind="killing")


def custom_metric(dim: int, matrix_fn, signature: tuple[int, int]) -> MetricField:
    return MetricField(dim=dim, kind="custom", matrix_fn=matrix_fn, signature=signature)


def cometric_matrix(metric: MetricField, structure: PoissonStructure, x) -> np.ndarray:
    """D(x) = Pi(x)^T g(x) Pi(x), symmetric by construction."""
    if metric.dim != structure.dim:
        raise DimensionMismatch(
            f"metric dim {metric.dim} does not match bivector dim {structure.dim}"
        )
    pi = structure.matrix(x)
    d = pi.T @ metric.matrix(x) @ pi
    return 0.5 * (d + d.T)


@dataclass(frozen=True)
class CometricTensor:
    """Value of the coupling tensor at one point, with its numerical rank."""

    matrix: np.ndarray
    rank: int


def cometric_at(
    metric: MetricField, structure: PoissonStructure, x, tol: float = RANK_CUTOFF
) -> CometricTensor:
    d = cometric_matrix(metric, structure, x)
    return CometricTensor(matrix=d, rank=_rank(d, tol))


def double_bracket_field(
    metric: MetricField, structure: PoissonStructure, g_fn: ScalarFunction, x
) -> np.ndarray:
    """Generalized double bracket vector at x: -D(x) dG(x)."""
    x = np.asarray(x, dtype=float)
    return -cometric_matrix(metric, structure, x) @ g_fn.gradient(x)


def lie_double_bracket(alg: LieAlgebra, g_fn: ScalarFunction, xi) -> np.ndarray:
    """Iterated bracket [xi, [xi, grad G]] with grad raised by the Killing
    inverse; requires a nondegenerate Killing matrix."""
    if not alg.is_semisimple:
        raise DegenerateKilling(
            f"algebra {alg.name!r} has a degenerate Killing matrix; gradients undefined"
        )
    xi = np.asarray(xi, dtype=float)
    grad = alg.gradient(g_fn.gradient(xi))
    return alg.bracket(xi, alg.bracket(xi, grad))


@dataclass(frozen=True)
class RankReport:
    applicable: bool
    rank_bivector: int
    rank_cometric: int
    equal: bool


def kernel_rank_check(
    metric: MetricField, structure: PoissonStructure, x, tol: float = RANK_CUTOFF
) -> RankReport:
    """Compare rank D with rank Pi at a point.

    Kernel equality of D and Pi is only guaranteed for positive-definite
    metrics; for indefinite ones the report is marked inapplicable rather
    than raising.
    """
    pi = structure.matrix(x)
    d = cometric_matrix(metric, structure, x)
    rank_pi = _rank(pi, tol)
    rank_d = _rank(d, tol)
    return RankReport(
        applicable=metric.is_positive_definite,
        rank_bivector=rank_pi,
        rank_cometric=rank_d,
        equal=rank_pi == rank_d,
    )


def _rank(m: np.ndarray, tol: float) -> int:
    sig = np.linalg.svd(m, compute_uv=False)
    if sig.size == 0 or sig[0] == 0.0:
        return 0
    return int(np.sum(sig > tol * sig[0]))
