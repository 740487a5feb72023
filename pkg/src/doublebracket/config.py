"""Scenario configuration: YAML in, validated component objects out.

A scenario file is a single nested key-value document naming an algebra, a
metric, a bivector, a chart, a function G, and optionally a flow section and
an evaluation grid (see ``scenario.example.yaml`` at the repository root for
the full annotated syntax).  Built-in scenarios ship as package data and can
be addressed by bare name, e.g. ``doublebracket verify --config sl2-hyperbolic``.

All cross-component dimension checks happen here, before any computation
starts; violations raise ConfigError with the offending key path.
"""

from __future__ import annotations

import importlib.resources
import os
from dataclasses import dataclass, field

import numpy as np
import yaml

from . import algebra as algebra_mod
from . import charts as charts_mod
from . import scalarfn
from .charts import LeafChart
from .cometric import (
    MetricField,
    constant_metric,
    custom_metric,
    euclidean_metric,
    killing_metric,
)
from .errors import ConfigError, DoubleBracketError
from .poisson import (
    PoissonStructure,
    canonical_structure,
    lie_poisson,
    polynomial_structure,
)

SUITE_NAMES = ("golden_sl2", "theorem2", "theorem3", "theorem4", "remark", "casimir", "kernel")

BUILTIN_SCENARIOS = (
    "sl2-hyperbolic",
    "sl2-onesheet",
    "sl2-cone",
    "so3-orbit",
    "so3-brockett",
    "so4-orbit",
    "canonical-r2n",
)

DEFAULT_TOLERANCES: dict[str, float] = {
    "golden_matrices": 1e-12,
    "golden_grid": 1e-9,
    "theorem2": 1e-12,
    "theorem3": 1e-8,
    "theorem4": 1e-8,
    "theorem1": 1e-8,
    "remark": 1e-9,
    "casimir": 1e-10,
    "chart_casimir": 1e-9,
    "kernel": 0.0,
    "cone": 0.0,
}

ENV_TOLERANCE_PREFIX = "DOUBLEBRACKET_TOL_"


@dataclass
class FlowSection:
    field: str  # brockett | hamiltonian | double_bracket
    h: float
    t_final: float
    x0: np.ndarray
    monitors: tuple[str, ...] = ("G", "casimirs")
    method: str = "lie"


@dataclass
class GridSection:
    ranges: list[tuple[float, float]]
    resolution: list[int]


@dataclass
class Scenario:
    name: str
    algebra: algebra_mod.LieAlgebra | None = None
    metric: MetricField | None = None
    structure: PoissonStructure | None = None
    chart: LeafChart | None = None
    g_fn: scalarfn.ScalarFunction | None = None
    g_pairing_vec: np.ndarray | None = None  # N when G is the Killing pairing
    flow: FlowSection | None = None
    grid: GridSection | None = None
    suites: list[str] = field(default_factory=list)
    tolerances: dict[str, float] = field(default_factory=dict)
    seed: int = 42


def resolve_tolerance(name: str, scenario: Scenario | None = None) -> float:
    """Config override beats environment override beats the default table."""
    if scenario is not None and name in scenario.tolerances:
        return float(scenario.tolerances[name])
    env = os.environ.get(ENV_TOLERANCE_PREFIX + name.upper())
    if env is not None:
        return float(env)
    if name not in DEFAULT_TOLERANCES:
        raise ConfigError(f"unknown tolerance name {name!r}")
    return DEFAULT_TOLERANCES[name]


def load_scenario(source: str) -> Scenario:
    """Load a scenario from a YAML path or a built-in scenario name."""
    if source in BUILTIN_SCENARIOS:
        ref = importlib.resources.files("doublebracket") / "scenarios" / f"{source}.yaml"
        text = ref.read_text(encoding="utf-8")
    else:
        if not os.path.exists(source):
            raise ConfigError(
                f"config {source!r} is neither a file nor a built-in scenario "
                f"{sorted(BUILTIN_SCENARIOS)}"
            )
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse YAML from {source!r}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"scenario document must be a mapping, got {type(raw).__name__}")
    return build_scenario(raw)


def build_scenario(raw: dict) -> Scenario:
    scn = Scenario(name=str(raw.get("name", "unnamed")))
    scn.seed = int(raw.get("seed", 42))

    if "algebra" in raw:
        scn.algebra = _build_algebra(raw["algebra"])
    if "poisson" in raw:
        scn.structure = _build_poisson(raw["poisson"], scn)
    if "casimirs" in raw:
        _register_casimirs(raw["casimirs"], scn)
    if "metric" in raw:
        scn.metric = _build_metric(raw["metric"], scn)
    if "chart" in raw:
        scn.chart = _build_chart(raw["chart"])
    if "G" in raw:
        scn.g_fn, scn.g_pairing_vec = _build_g(raw["G"], scn)
    if "flow" in raw:
        scn.flow = _build_flow(raw["flow"])
    if "grid" in raw:
        scn.grid = _build_grid(raw["grid"])

    suites = raw.get("suites", [])
    if not isinstance(suites, list):
        raise ConfigError("suites: expected a list of suite names")
    for s in suites:
        if s not in SUITE_NAMES:
            raise ConfigError(f"suites: unknown suite {s!r}; valid names are {SUITE_NAMES}")
    scn.suites = [str(s) for s in suites]

    tol = raw.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ConfigError("tolerances: expected a mapping")
    scn.tolerances = {str(k): float(v) for k, v in tol.items()}

    _cross_check(scn)
    return scn


# ---------------------------------------------------------------------------
# section builders
# ---------------------------------------------------------------------------


def _build_algebra(section) -> algebra_mod.LieAlgebra:
    if isinstance(section, str):
        section = {"builtin": section}
    if not isinstance(section, dict):
        raise ConfigError("algebra: expected a name or mapping")
    try:
        if "builtin" in section:
            name = section["builtin"]
            if name not in algebra_mod.BUILTIN_ALGEBRAS:
                raise ConfigError(
                    f"algebra.builtin: unknown algebra {name!r}; "
                    f"valid names are {sorted(algebra_mod.BUILTIN_ALGEBRAS)}"
                )
            return algebra_mod.BUILTIN_ALGEBRAS[name]()
        if "constants_file" in section:
            return algebra_mod.lie_algebra(
                algebra_mod.load_structure_constants(section["constants_file"])
            )
        if "constants" in section:
            return algebra_mod.lie_algebra(np.asarray(section["constants"], dtype=float))
    except DoubleBracketError as exc:
        raise ConfigError(f"algebra: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"algebra.constants_file: {exc}") from exc
    raise ConfigError("algebra: need one of builtin | constants | constants_file")


def _build_poisson(section, scn: Scenario) -> PoissonStructure:
    if isinstance(section, str):
        section = {"kind": section}
    kind = section.get("kind")
    scale = float(section.get("scale", 1.0))
    try:
        if kind == "lie_poisson":
            if scn.algebra is None:
                raise ConfigError("poisson.kind=lie_poisson requires an algebra section")
            return lie_poisson(scn.algebra, scale=scale)
        if kind == "canonical":
            n = int(section.get("n", 1))
            return canonical_structure(n)
        if kind == "polynomial":
            dim = int(section.get("dim", 0))
            if dim <= 0:
                raise ConfigError("poisson.dim: positive dimension required")
            entries = {}
            for entry in section.get("entries", []):
                i, j = int(entry["i"]) - 1, int(entry["j"]) - 1
                entries[(i, j)] = _monomials(entry.get("monomials", []), "poisson.entries")
            return polynomial_structure(dim, entries)
    except DoubleBracketError as exc:
        raise ConfigError(f"poisson: {exc}") from exc
    raise ConfigError(f"poisson.kind: unknown kind {kind!r}")


def _register_casimirs(section, scn: Scenario) -> None:
    if scn.structure is None:
        raise ConfigError("casimirs: requires a poisson section")
    if not isinstance(section, list):
        raise ConfigError("casimirs: expected a list")
    for i, entry in enumerate(section):
        fn = scalarfn.polynomial(
            scn.structure.dim, _monomials(entry.get("monomials", []), f"casimirs[{i}]")
        )
        try:
            scn.structure = scn.structure.with_casimir(fn)
        except DoubleBracketError as exc:
            raise ConfigError(f"casimirs[{i}]: {exc}") from exc


def _build_metric(section, scn: Scenario) -> MetricField:
    if isinstance(section, str):
        section = {"kind": section}
    kind = section.get("kind")
    try:
        if kind == "killing":
            if scn.algebra is None:
                raise ConfigError("metric.kind=killing requires an algebra section")
            return killing_metric(scn.algebra)
        if kind == "euclidean":
            dim = _ambient_dim(scn, section.get("dim"))
            return euclidean_metric(dim)
        if kind == "constant":
            return constant_metric(np.asarray(section["matrix"], dtype=float))
        if kind == "custom":
            # point-dependent metric with polynomial entries on the upper
            # triangle (i <= j); the declared signature is enforced at every
            # evaluation
            dim = _ambient_dim(scn, section.get("dim"))
            fns = {}
            for entry in section.get("entries", []):
                i, j = int(entry["i"]) - 1, int(entry["j"]) - 1
                if not 0 <= i <= j < dim:
                    raise ConfigError(f"metric.entries: ({i + 1}, {j + 1}) not upper-triangular")
                fns[(i, j)] = scalarfn.polynomial(
                    dim, _monomials(entry.get("monomials", []), "metric.entries")
                )
            sig = section.get("signature")
            if sig is None:
                raise ConfigError("metric.kind=custom requires a signature [n_plus, n_minus]")

            def matrix_fn(x, fns=fns, dim=dim):
                g = np.zeros((dim, dim))
                for (i, j), f in fns.items():
                    g[i, j] = f.value(x)
                    g[j, i] = g[i, j]
                return g

            return custom_metric(dim, matrix_fn, (int(sig[0]), int(sig[1])))
    except DoubleBracketError as exc:
        raise ConfigError(f"metric: {exc}") from exc
    except KeyError as exc:
        raise ConfigError(f"metric: missing key {exc}") from None
    raise ConfigError(f"metric.kind: unknown kind {kind!r}")


def _build_chart(section) -> LeafChart:
    if isinstance(section, str):
        section = {"builtin": section}
    params = section.get("params", {}) or {}
    builders = {
        "h2_stereographic": lambda: charts_mod.stereographic_disc(),
        "h2_sheet": lambda: charts_mod.hyperboloid_sheet(float(params.get("c", 1.0))),
        "one_sheet": lambda: charts_mod.one_sheet(float(params.get("l", 1.0))),
        "cone": lambda: charts_mod.cone_chart(),
        "sphere": lambda: charts_mod.sphere_chart(float(params.get("radius", 1.0))),
        "product_sphere": lambda: charts_mod.product_sphere_chart(
            float(params.get("r_plus", 1.0)), float(params.get("r_minus", 0.5))
        ),
        "identity": lambda: charts_mod.identity_chart(int(params.get("n", 2))),
    }
    if "builtin" in section:
        name = section["builtin"]
        if name not in builders:
            raise ConfigError(
                f"chart.builtin: unknown chart {name!r}; valid names are {sorted(builders)}"
            )
        chart = builders[name]()
    elif "custom" in section:
        custom = section["custom"]
        try:
            chart = charts_mod.expression_chart(
                custom["phi"],
                custom["coords"],
                sample_box=custom.get("sample_box"),
                name=str(custom.get("name", "custom")),
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"chart.custom: {exc}") from None
    else:
        raise ConfigError("chart: need builtin or custom")
    if section.get("jacobians", "analytic") == "fd":
        chart = charts_mod.with_fd_jacobians(chart)
    return chart


def _build_g(section, scn: Scenario):
    if not isinstance(section, dict):
        raise ConfigError("G: expected a mapping")
    kind = section.get("kind")
    pairing_vec = None
    if kind == "pairing":
        if scn.algebra is None:
            raise ConfigError("G.kind=pairing requires an algebra section (uses its Killing matrix)")
        pairing_vec = np.asarray(section["N"], dtype=float)
        fn = scalarfn.metric_pairing(scn.algebra.killing, pairing_vec)
    elif kind == "linear":
        fn = scalarfn.linear(np.asarray(section["coeffs"], dtype=float))
    elif kind == "quadratic":
        fn = scalarfn.quadratic(np.asarray(section["matrix"], dtype=float))
    elif kind == "polynomial":
        dim = _ambient_dim(scn, section.get("dim"))
        fn = scalarfn.polynomial(dim, _monomials(section.get("monomials", []), "G"))
    elif kind == "coordinate":
        dim = _ambient_dim(scn, section.get("dim"))
        fn = scalarfn.coordinate(dim, int(section["index"]) - 1)
    else:
        raise ConfigError(f"G.kind: unknown kind {kind!r}")
    return fn, pairing_vec


def _build_flow(section) -> FlowSection:
    try:
        flow = FlowSection(
            field=str(section.get("field", "brockett")),
            h=float(section["h"]),
            t_final=float(section["T"]),
            x0=np.asarray(section["x0"], dtype=float),
            monitors=tuple(section.get("monitors", ["G", "casimirs"])),
            method=str(section.get("method", "lie")),
        )
    except KeyError as exc:
        raise ConfigError(f"flow: missing key {exc}") from None
    if flow.field not in ("brockett", "hamiltonian", "double_bracket"):
        raise ConfigError(f"flow.field: unknown field kind {flow.field!r}")
    if flow.h <= 0:
        raise ConfigError("flow.h: step must be positive")
    if flow.t_final < 0:
        raise ConfigError("flow.T: horizon must be nonnegative")
    return flow


def _build_grid(section) -> GridSection:
    try:
        ranges = [(float(lo), float(hi)) for lo, hi in section["ranges"]]
        resolution = [int(r) for r in section["resolution"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"grid: {exc}") from None
    if len(ranges) != len(resolution):
        raise ConfigError("grid: ranges and resolution must have equal length")
    if any(r < 1 for r in resolution):
        raise ConfigError("grid.resolution: entries must be >= 1")
    return GridSection(ranges=ranges, resolution=resolution)


def _monomials(entries, where: str) -> list[tuple[float, list[int]]]:
    out = []
    for e in entries:
        try:
            out.append((float(e["coeff"]), [int(v) for v in e["exps"]]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: bad monomial {e!r} ({exc})") from None
    return out


def _ambient_dim(scn: Scenario, explicit) -> int:
    if explicit is not None:
        return int(explicit)
    if scn.structure is not None:
        return scn.structure.dim
    if scn.algebra is not None:
        return scn.algebra.dim
    raise ConfigError("cannot infer dimension; give dim explicitly")


def _cross_check(scn: Scenario) -> None:
    dims = {}
    if scn.algebra is not None:
        dims["algebra"] = scn.algebra.dim
    if scn.structure is not None:
        dims["poisson"] = scn.structure.dim
    if scn.metric is not None:
        dims["metric"] = scn.metric.dim
    if scn.chart is not None:
        dims["chart"] = scn.chart.ambient_dim
    if scn.g_fn is not None:
        dims["G"] = scn.g_fn.dim
    if scn.flow is not None:
        dims["flow.x0"] = scn.flow.x0.size
    if len(set(dims.values())) > 1:
        raise ConfigError(f"dimension mismatch between sections: {dims}")
    if scn.grid is not None and scn.chart is not None:
        if len(scn.grid.ranges) != scn.chart.leaf_dim:
            raise ConfigError(
                f"grid has {len(scn.grid.ranges)} coordinates but chart "
                f"{scn.chart.name!r} has leaf dimension {scn.chart.leaf_dim}"
            )
