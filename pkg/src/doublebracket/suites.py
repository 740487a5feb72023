"""Verification suites behind ``doublebracket verify``.

Each suite turns one family of identities into named checks with a residual,
a tolerance and a pass flag.  Golden-value checks compare against frozen
closed forms for the sl(2, R) geometry (Killing matrices, the linear
bivector, the coupling tensor, and the leaf metrics of the hyperboloid
charts); the theorem suites compare two independently computed sides of each
identity at seeded random points.  Identical configuration and seed give
bit-identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import algebra as algebra_mod
from .charts import grid_points, sample_chart_points, stereographic_disc
from .charts import cone_chart, hyperboloid_sheet, one_sheet
from .cometric import (
    cometric_matrix,
    double_bracket_field,
    euclidean_metric,
    kernel_rank_check,
    killing_metric,
    lie_double_bracket,
)
from .config import Scenario, resolve_tolerance
from .errors import ConfigError, DegenerateInducedMetric
from .leaf import (
    compare_with_normal_metric,
    double_bracket_metric,
    gradient_residual,
    induced_metric,
    normal_gradient_residual,
    restricted_cometric,
)
from .poisson import hamiltonian_field, lie_poisson
from .scalarfn import linear, quadratic

THEOREM_POINTS = 100
ORBIT_POINTS = 50


@dataclass(frozen=True)
class CheckResult:
    suite: str
    check: str
    point: list | None
    residual: float
    tolerance: float
    passed: bool


def _result(suite, check, tol, residual, point=None) -> CheckResult:
    return CheckResult(
        suite=suite,
        check=check,
        point=None if point is None else [float(v) for v in np.asarray(point).ravel()],
        residual=float(residual),
        tolerance=float(tol),
        passed=bool(residual <= tol),
    )


def _worst(points, fn):
    worst, worst_pt = -1.0, None
    for u in points:
        r = float(fn(u))
        if r > worst:
            worst, worst_pt = r, u
    return worst, worst_pt


# ---------------------------------------------------------------------------
# frozen sl(2, R) closed forms
# ---------------------------------------------------------------------------

KILLING_ELEMENTARY = np.array([[0.0, 4.0, 0.0], [4.0, 0.0, 0.0], [0.0, 0.0, 8.0]])
KILLING_ROTATED = np.diag([1.0, 1.0, -1.0])


def golden_bivector(p):
    x, y, z = p
    s = 1.0 / math.sqrt(2.0)
    return s * np.array([[0.0, z, y], [-z, 0.0, -x], [-y, x, 0.0]])


def golden_cometric(p):
    x, y, z = p
    return 0.5 * np.array(
        [
            [-(y**2) + z**2, x * y, x * z],
            [x * y, -(x**2) + z**2, y * z],
            [x * z, y * z, x**2 + y**2],
        ]
    )


def golden_disc_tau(u):
    r2 = u[0] ** 2 + u[1] ** 2
    return (8.0 / (1.0 - r2) ** 2) * np.eye(2)


def golden_disc_induced(u):
    r2 = u[0] ** 2 + u[1] ** 2
    return (4.0 / (1.0 - r2) ** 2) * np.eye(2)


def golden_disc_restricted(z):
    return (0.5 / (1.0 + z) ** 2) * np.eye(2)


def golden_sheet_tau(nu):
    return np.diag([2.0 * (math.cosh(nu) ** 2 - 1.0), 2.0])


def golden_sheet_induced(c, nu):
    return np.diag([c**2 * (math.cosh(nu) ** 2 - 1.0), c**2])


def golden_one_sheet_tau(nu):
    return np.diag([-2.0 * math.cosh(nu) ** 2, 2.0])


def golden_one_sheet_induced(l, nu):
    return np.diag([l**2 * math.cosh(nu) ** 2, -(l**2)])


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_golden_sl2(scn: Scenario, rng: np.random.Generator) -> list[CheckResult]:
    tol_m = resolve_tolerance("golden_matrices", scn)
    tol_g = resolve_tolerance("golden_grid", scn)
    out = []

    alg_e = algebra_mod.sl2_elementary()
    alg = algebra_mod.sl2_rotated()
    out.append(
        _result(
            "golden_sl2",
            "killing_elementary",
            tol_m,
            np.max(np.abs(alg_e.killing - KILLING_ELEMENTARY)),
        )
    )
    out.append(
        _result(
            "golden_sl2",
            "killing_rotated",
            tol_m,
            np.max(np.abs(alg.killing - KILLING_ROTATED)),
        )
    )

    structure = lie_poisson(alg)
    metric = killing_metric(alg)
    points = [rng.uniform(-2.0, 2.0, 3) for _ in range(THEOREM_POINTS)]
    r, p = _worst(points, lambda x: np.max(np.abs(structure.matrix(x) - golden_bivector(x))))
    out.append(_result("golden_sl2", "bivector_matrix", tol_m, r, p))
    r, p = _worst(
        points, lambda x: np.max(np.abs(cometric_matrix(metric, structure, x) - golden_cometric(x)))
    )
    out.append(_result("golden_sl2", "cometric_matrix", tol_m, r, p))

    disc = stereographic_disc()
    disc_grid = [
        u
        for u in grid_points([(-0.9, 0.9), (-0.9, 0.9)], [21, 21])
        if u[0] ** 2 + u[1] ** 2 <= 0.81 + 1e-12
    ]
    r, p = _worst(
        disc_grid,
        lambda u: np.max(
            np.abs(double_bracket_metric(metric, structure, disc, u) - golden_disc_tau(u))
        ),
    )
    out.append(_result("golden_sl2", "disc_tau", tol_g, r, p))
    r, p = _worst(
        disc_grid,
        lambda u: np.max(np.abs(induced_metric(metric, disc, u) - golden_disc_induced(u))),
    )
    out.append(_result("golden_sl2", "disc_induced_metric", tol_g, r, p))
    r, p = _worst(
        disc_grid,
        lambda u: np.max(
            np.abs(
                restricted_cometric(metric, structure, disc, u)
                - golden_disc_restricted(disc.point(u)[2])
            )
        ),
    )
    out.append(_result("golden_sl2", "disc_restricted_cometric", tol_g, r, p))

    sheet_grid = grid_points([(-2.5, 2.5), (0.2, 1.5)], [10, 10])
    for c in (0.5, 1.0, 2.0):
        chart = hyperboloid_sheet(c)
        r, p = _worst(
            sheet_grid,
            lambda u: np.max(
                np.abs(double_bracket_metric(metric, structure, chart, u) - golden_sheet_tau(u[1]))
            ),
        )
        out.append(_result("golden_sl2", f"sheet_tau_c={c}", tol_g, r, p))
        r, p = _worst(
            sheet_grid,
            lambda u: np.max(
                np.abs(induced_metric(metric, chart, u) - golden_sheet_induced(c, u[1]))
            ),
        )
        out.append(_result("golden_sl2", f"sheet_induced_c={c}", tol_g, r, p))

    chart = one_sheet(1.0)
    os_grid = grid_points([(-2.5, 2.5), (-1.2, 1.2)], [10, 10])
    r, p = _worst(
        os_grid,
        lambda u: np.max(
            np.abs(double_bracket_metric(metric, structure, chart, u) - golden_one_sheet_tau(u[1]))
        ),
    )
    out.append(_result("golden_sl2", "one_sheet_tau", tol_g, r, p))
    r, p = _worst(
        os_grid,
        lambda u: np.max(
            np.abs(induced_metric(metric, chart, u) - golden_one_sheet_induced(1.0, u[1]))
        ),
    )
    out.append(_result("golden_sl2", "one_sheet_induced", tol_g, r, p))

    cone = cone_chart()
    cone_grid = grid_points([(0.2, 2.0), (-3.0, 3.0)], [10, 10])
    non_degenerate = 0
    for u in cone_grid:
        try:
            induced_metric(metric, cone, u)
            non_degenerate += 1
        except DegenerateInducedMetric:
            pass
    out.append(
        _result(
            "golden_sl2",
            "cone_degenerate_everywhere",
            resolve_tolerance("cone", scn),
            non_degenerate / len(cone_grid),
        )
    )
    return out


def suite_theorem2(scn: Scenario, rng: np.random.Generator) -> list[CheckResult]:
    """Descent field of the coupling tensor against the iterated bracket."""
    if scn.algebra is None:
        raise ConfigError("theorem2 suite requires an algebra section")
    alg = scn.algebra
    metric = killing_metric(alg)
    structure = lie_poisson(alg)
    tol = resolve_tolerance("theorem2", scn)
    out = []
    for label in ("linear", "quadratic"):
        worst, worst_pt = -1.0, None
        for _ in range(THEOREM_POINTS):
            xi = rng.uniform(-1.0, 1.0, alg.dim)
            if label == "linear":
                g_fn = linear(rng.uniform(-1.0, 1.0, alg.dim))
            else:
                q = rng.uniform(-1.0, 1.0, (alg.dim, alg.dim))
                g_fn = quadratic(0.5 * (q + q.T))
            r = float(
                np.max(
                    np.abs(
                        double_bracket_field(metric, structure, g_fn, xi)
                        - lie_double_bracket(alg, g_fn, xi)
                    )
                )
            )
            if r > worst:
                worst, worst_pt = r, xi
        out.append(_result("theorem2", f"equivalence_{label}", tol, worst, worst_pt))
    return out


def suite_theorem3(scn: Scenario, rng: np.random.Generator) -> list[CheckResult]:
    """Descent field pushed to the leaf against the negative tau-gradient."""
    for key, val in (("chart", scn.chart), ("metric", scn.metric), ("poisson", scn.structure)):
        if val is None:
            raise ConfigError(f"theorem3 suite requires a {key} section")
    if scn.g_fn is None:
        raise ConfigError("theorem3 suite requires a G section")
    tol = resolve_tolerance("theorem3", scn)
    points = sample_chart_points(scn.chart, rng, THEOREM_POINTS)
    r, p = _worst(
        points, lambda u: gradient_residual(scn.metric, scn.structure, scn.chart, scn.g_fn, u)
    )
    return [_result("theorem3", "leaf_gradient", tol, r, p)]


def suite_theorem4(scn: Scenario, rng: np.random.Generator) -> list[CheckResult]:
    """Double bracket metric against minus the normal metric on orbits."""
    if scn.algebra is None or scn.chart is None:
        raise ConfigError("theorem4 suite requires algebra and chart sections")
    if not scn.algebra.is_compact:
        raise ConfigError(
            f"theorem4 suite needs a compact algebra; {scn.algebra.name!r} has "
            f"Killing signature {scn.algebra.killing_signature}"
        )
    out = []
    points = sample_chart_points(scn.chart, rng, ORBIT_POINTS)
    r, p = _worst(points, lambda u: compare_with_normal_metric(scn.algebra, scn.chart, u).max_abs_sum)
    out.append(_result("theorem4", "tau_plus_normal", resolve_tolerance("theorem4", scn), r, p))

    n_vec = scn.g_pairing_vec
    if n_vec is None:
        n_vec = rng.uniform(-1.0, 1.0, scn.algebra.dim)
    r, p = _worst(points, lambda u: normal_gradient_residual(scn.algebra, scn.chart, n_vec, u))
    out.append(
        _result("theorem4", "normal_gradient_pushforward", resolve_tolerance("theorem1", scn), r, p)
    )
    return out


def suite_remark(scn: Scenario, rng: np.random.Generator) -> list[CheckResult]:
    """Restricted coupling tensor inverts the double bracket metric."""
    for key, val in (("chart", scn.chart), ("metric", scn.metric), ("poisson", scn.structure)):
        if val is None:
            raise ConfigError(f"remark suite requires a {key} section")
    tol = resolve_tolerance("remark", scn)
    eye = np.eye(scn.chart.leaf_dim)

    def residual(u):
        tau = double_bracket_metric(scn.metric, scn.structure, scn.chart, u)
        restricted = restricted_cometric(scn.metric, scn.structure, scn.chart, u)
        return np.max(np.abs(restricted @ tau - eye))

    points = sample_chart_points(scn.chart, rng, ORBIT_POINTS)
    r, p = _worst(points, residual)
    return [_result("remark", "restricted_cometric_inverts_tau", tol, r, p)]


def suite_casimir(scn: Scenario, rng: np.random.Generator) -> list[CheckResult]:
    """Registered Casimirs: bivector kernel, zero Hamiltonian field,
    tangency of the descent field, constancy along the chart."""
    if scn.structure is None:
        raise ConfigError("casimir suite requires a poisson section")
    tol = resolve_tolerance("casimir", scn)
    out = []
    points = [rng.uniform(-1.0, 1.0, scn.structure.dim) for _ in range(THEOREM_POINTS)]
    for i, cas in enumerate(scn.structure.casimirs):
        r, p = _worst(
            points,
            lambda x: np.linalg.norm(scn.structure.matrix(x) @ cas.gradient(x))
            / (1.0 + float(x @ x)),
        )
        out.append(_result("casimir", f"C{i + 1}_bivector_kernel", tol, r, p))
        field = hamiltonian_field(scn.structure, cas)
        r, p = _worst(points, lambda x: np.linalg.norm(field(x)) / (1.0 + float(x @ x)))
        out.append(_result("casimir", f"C{i + 1}_hamiltonian_zero", tol, r, p))
        if scn.metric is not None and scn.g_fn is not None:
            r, p = _worst(
                points,
                lambda x: abs(
                    float(
                        cas.gradient(x)
                        @ double_bracket_field(scn.metric, scn.structure, scn.g_fn, x)
                    )
                )
                / (1.0 + float(x @ x)),
            )
            out.append(_result("casimir", f"C{i + 1}_descent_tangency", tol, r, p))
    if scn.chart is not None and scn.structure.casimirs:
        chart_pts = sample_chart_points(scn.chart, rng, ORBIT_POINTS)
        worst = 0.0
        for cas in scn.structure.casimirs:
            ref = cas.value(scn.chart.point(chart_pts[0]))
            for u in chart_pts[1:]:
                worst = max(worst, abs(cas.value(scn.chart.point(u)) - ref))
        out.append(
            _result("casimir", "constant_along_chart", resolve_tolerance("chart_casimir", scn), worst)
        )
    return out


def suite_kernel(scn: Scenario, rng: np.random.Generator) -> list[CheckResult]:
    """rank D = rank Pi under a positive-definite metric (Euclidean here)."""
    if scn.structure is None:
        raise ConfigError("kernel suite requires a poisson section")
    metric = euclidean_metric(scn.structure.dim)
    unequal = 0
    for _ in range(THEOREM_POINTS):
        x = rng.uniform(-1.0, 1.0, scn.structure.dim)
        report = kernel_rank_check(metric, scn.structure, x)
        if not (report.applicable and report.equal):
            unequal += 1
    return [
        _result(
            "kernel",
            "rank_equality_fraction_failed",
            resolve_tolerance("kernel", scn),
            unequal / THEOREM_POINTS,
        )
    ]


SUITES = {
    "golden_sl2": suite_golden_sl2,
    "theorem2": suite_theorem2,
    "theorem3": suite_theorem3,
    "theorem4": suite_theorem4,
    "remark": suite_remark,
    "casimir": suite_casimir,
    "kernel": suite_kernel,
}


def run_suites(
    scn: Scenario, names: list[str] | None = None, seed: int | None = None
) -> list[CheckResult]:
    """Run the named suites (default: the scenario's list) with a fresh
    seeded generator per suite, so results do not depend on suite selection."""
    if names is None:
        names = list(scn.suites)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suites {unknown}; valid names are {sorted(SUITES)}")
    seed = scn.seed if seed is None else int(seed)
    results: list[CheckResult] = []
    for name in names:
        rng = np.random.default_rng(seed)
        results.extend(SUITES[name](scn, rng))
    return results
