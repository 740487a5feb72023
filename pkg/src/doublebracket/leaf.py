"""Geometry on symplectic leaves through explicit charts.

Given an ambient metric g and bivector Pi, a chart of a regular leaf yields

* the induced metric  g_ind = J_phi^T g J_phi,
* the leaf symplectic matrix  omega = (J_F Pi J_F^T)^(-1),
* the double bracket metric  tau = omega^T g_ind^(-1) omega,
* the restricted coupling tensor  J_F D J_F^T, which inverts tau.

On regular leaves the descent field -D dG pushes down to the negative
tau-gradient of G restricted to the leaf; on compact-algebra orbits tau is
minus the classical normal metric.  Both facts are verified numerically by
the test suite with each side computed independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import LieAlgebra, ad_kernel_image
from .charts import LeafChart
from .cometric import MetricField, cometric_matrix, killing_metric
from .errors import (
    DegenerateInducedMetric,
    DimensionMismatch,
    NonInvertibleLeafBivector,
    NotCompact,
    NotTangent,
)
from .poisson import PoissonStructure, lie_poisson
from .scalarfn import ScalarFunction, metric_pairing

INDUCED_DET_TOL = 1e-12
BIVECTOR_DET_TOL = 1e-12
TANGENT_TOL = 1e-8


def induced_metric(metric: MetricField, chart: LeafChart, u) -> np.ndarray:
    """Pull the ambient metric back through the chart: J_phi^T g J_phi.

    Raises DegenerateInducedMetric (with the determinant attached) when the
    pullback is singular; that is the null-leaf case, e.g. the light cone of
    an indefinite ambient metric.
    """
    j = chart.param_jacobian(u)
    g = metric.matrix(chart.point(u))
    gi = j.T @ g @ j
    gi = 0.5 * (gi + gi.T)
    det = float(np.linalg.det(gi))
    scale = max(1.0, float(np.max(np.abs(gi))))
    if abs(det) < INDUCED_DET_TOL * scale**chart.leaf_dim:
        raise DegenerateInducedMetric(
            f"induced metric is degenerate on {chart.name} at u={np.asarray(u).tolist()} "
            f"(det = {det:.3e})",
            det,
        )
    return gi


def leaf_symplectic(structure: PoissonStructure, chart: LeafChart, u) -> np.ndarray:
    """Symplectic matrix of the leaf in chart coordinates.

    The bivector restricted to the chart is Pi_chart = J_F Pi J_F^T (the
    matrix of pairwise brackets of the chart coordinate functions); omega is
    its inverse, so the canonical block bivector [[0, I], [-I, 0]] yields
    omega = [[0, -I], [I, 0]].
    """
    x = chart.point(u)
    jf = chart.coords_jacobian(x)
    pi_chart = jf @ structure.matrix(x) @ jf.T
    det = float(np.linalg.det(pi_chart))
    scale = max(1.0, float(np.max(np.abs(pi_chart))))
    if abs(det) < BIVECTOR_DET_TOL * scale**chart.leaf_dim:
        raise NonInvertibleLeafBivector(
            f"bivector restricted to {chart.name} is singular at u={np.asarray(u).tolist()} "
            f"(det = {det:.3e}); the point is not on a regular leaf of dimension "
            f"{chart.leaf_dim}",
            det,
        )
    omega = np.linalg.inv(pi_chart)
    return 0.5 * (omega - omega.T)


def double_bracket_metric(
    metric: MetricField, structure: PoissonStructure, chart: LeafChart, u
) -> np.ndarray:
    """tau = omega^T g_ind^(-1) omega, the leaf metric that turns the descent
    field into a gradient field."""
    gi = induced_metric(metric, chart, u)
    omega = leaf_symplectic(structure, chart, u)
    tau = omega.T @ np.linalg.solve(gi, omega)
    return 0.5 * (tau + tau.T)


def restricted_cometric(
    metric: MetricField, structure: PoissonStructure, chart: LeafChart, u
) -> np.ndarray:
    """The coupling tensor D pushed into chart coordinates: J_F D J_F^T.

    On a regular leaf this matrix is the inverse of tau, which the test
    suite checks on every built-in chart.
    """
    x = chart.point(u)
    jf = chart.coords_jacobian(x)
    d = jf @ cometric_matrix(metric, structure, x) @ jf.T
    return 0.5 * (d + d.T)


def leaf_gradient(
    metric: MetricField,
    structure: PoissonStructure,
    chart: LeafChart,
    g_fn: ScalarFunction,
    u,
) -> np.ndarray:
    """tau-gradient of G restricted to the leaf, in chart coordinates:
    tau^(-1) d(G o phi)."""
    tau = double_bracket_metric(metric, structure, chart, u)
    grad_chart = chart.param_jacobian(u).T @ g_fn.gradient(chart.point(u))
    return np.linalg.solve(tau, grad_chart)


def gradient_residual(
    metric: MetricField,
    structure: PoissonStructure,
    chart: LeafChart,
    g_fn: ScalarFunction,
    u,
) -> float:
    """|v_G(phi(u)) + J_phi grad_tau(G|leaf)(u)|_2 - zero when the descent
    field is exactly the negative leaf gradient."""
    x = chart.point(u)
    ambient = -cometric_matrix(metric, structure, x) @ g_fn.gradient(x)
    pushed = chart.param_jacobian(u) @ leaf_gradient(metric, structure, chart, g_fn, u)
    return float(np.linalg.norm(ambient + pushed))


@dataclass(frozen=True)
class LeafMetricReport:
    """All four leaf matrices at one chart point."""

    g_ind: np.ndarray
    omega: np.ndarray
    tau: np.ndarray
    d_restricted: np.ndarray


def leaf_metric_report(
    metric: MetricField, structure: PoissonStructure, chart: LeafChart, u
) -> LeafMetricReport:
    gi = induced_metric(metric, chart, u)
    omega = leaf_symplectic(structure, chart, u)
    tau = omega.T @ np.linalg.solve(gi, omega)
    tau = 0.5 * (tau + tau.T)
    return LeafMetricReport(
        g_ind=gi,
        omega=omega,
        tau=tau,
        d_restricted=restricted_cometric(metric, structure, chart, u),
    )


# ---------------------------------------------------------------------------
# compact case: the normal metric on adjoint orbits
# ---------------------------------------------------------------------------


def normal_metric(alg: LieAlgebra, l_point, v, w, tangent_tol: float = TANGENT_TOL) -> float:
    """Normal (standard) metric of an adjoint orbit at L, evaluated on the
    tangent vectors v and w.

    Solves ad_L X = v and ad_L Y = w in least squares, projects the solutions
    onto Im(ad_L) orthogonally with respect to minus the Killing form, and
    returns -k(X_im, Y_im).  Well defined because ker(ad_L) and Im(ad_L) are
    Killing-orthogonal.  Requires a compact algebra (Killing negative
    definite) and tangent inputs v, w in Im(ad_L).
    """
    if not alg.is_compact:
        raise NotCompact(
            f"algebra {alg.name!r} has Killing signature {alg.killing_signature}; "
            "the normal metric needs a negative-definite Killing form"
        )
    l_point = np.asarray(l_point, dtype=float)
    ad_l = alg.ad(l_point)
    _, image = ad_kernel_image(alg, l_point)
    minus_k = -alg.killing
    gram = image.T @ minus_k @ image

    def solve_and_project(t):
        t = np.asarray(t, dtype=float)
        if t.shape != (alg.dim,):
            raise DimensionMismatch(f"tangent vector must have dim {alg.dim}")
        sol, *_ = np.linalg.lstsq(ad_l, t, rcond=None)
        resid = float(np.linalg.norm(ad_l @ sol - t))
        if resid > tangent_tol * (1.0 + float(np.linalg.norm(t))):
            raise NotTangent(
                f"vector {t.tolist()} lies outside Im(ad_L) (residual {resid:.3e})"
            )
        return image @ np.linalg.solve(gram, image.T @ minus_k @ sol)

    xv = solve_and_project(v)
    yv = solve_and_project(w)
    return float(xv @ minus_k @ yv)


def normal_metric_matrix(alg: LieAlgebra, chart: LeafChart, u) -> np.ndarray:
    """Matrix of the normal metric in chart coordinates: entries are the
    normal pairings of the columns of the parametrization Jacobian."""
    l_point = chart.point(u)
    j = chart.param_jacobian(u)
    d = chart.leaf_dim
    n = np.empty((d, d))
    for a in range(d):
        for b in range(a, d):
            n[a, b] = normal_metric(alg, l_point, j[:, a], j[:, b])
            n[b, a] = n[a, b]
    return n


@dataclass(frozen=True)
class NormalComparison:
    tau: np.ndarray
    normal: np.ndarray
    max_abs_sum: float


def compare_with_normal_metric(alg: LieAlgebra, chart: LeafChart, u) -> NormalComparison:
    """tau against the normal metric on a compact orbit (they differ by a
    sign); ambient metric = Killing, bivector = Lie-Poisson."""
    tau = double_bracket_metric(killing_metric(alg), lie_poisson(alg), chart, u)
    n = normal_metric_matrix(alg, chart, u)
    return NormalComparison(tau=tau, normal=n, max_abs_sum=float(np.max(np.abs(tau + n))))


def normal_gradient_residual(alg: LieAlgebra, chart: LeafChart, n_vec, u) -> float:
    """Push the normal-metric gradient of H = k(. , N) through the chart and
    compare with the iterated bracket [L, [L, N]]."""
    n_vec = np.asarray(n_vec, dtype=float)
    h = metric_pairing(alg.killing, n_vec)
    l_point = chart.point(u)
    j = chart.param_jacobian(u)
    grad_chart = j.T @ h.gradient(l_point)
    n_matrix = normal_metric_matrix(alg, chart, u)
    pushed = j @ np.linalg.solve(n_matrix, grad_chart)
    rhs = alg.bracket(l_point, alg.bracket(l_point, n_vec))
    return float(np.linalg.norm(pushed - rhs))
