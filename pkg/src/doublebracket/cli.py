"""Command-line front end.

Three subcommands share the scenario-config machinery:

* ``verify``      run verification suites, emit a JSON report, exit 0 only
                  when every check passes;
* ``flow``        integrate the configured flow, write a trajectory CSV and
                  print a convergence summary;
* ``leaf-metric`` sweep a chart grid and write the leaf matrices per point,
                  tagging degenerate points instead of aborting.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 runtime or numeric error.  Identical config and seed produce byte-identical
output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

import numpy as np

from .algebra import ad_kernel_image
from .charts import grid_points
from .cometric import double_bracket_field
from .config import Scenario, load_scenario
from .errors import (
    ConfigError,
    DegenerateInducedMetric,
    DoubleBracketError,
    NonInvertibleLeafBivector,
)
from .flow import (
    brockett_flow,
    casimir_monitors,
    equilibrium_report,
    field_norm_monitor,
    integrate,
    pairing_monitor,
    write_trajectory_csv,
)
from .leaf import leaf_metric_report
from .poisson import hamiltonian_field
from .suites import run_suites


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = load_scenario(args.config)
        if args.seed is not None:
            scenario.seed = int(args.seed)
        if args.command == "verify":
            return _cmd_verify(scenario, args)
        if args.command == "flow":
            return _cmd_flow(scenario, args)
        return _cmd_leaf_metric(scenario, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DoubleBracketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doublebracket",
        description="Double bracket vector fields, leaf metrics and Brockett flows "
        "on Poisson manifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run verification suites and write a JSON report"),
        ("flow", "integrate the configured flow and write a trajectory CSV"),
        ("leaf-metric", "evaluate leaf metrics over the configured grid"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument(
            "--config",
            required=True,
            help="path to a scenario YAML file, or a built-in scenario name",
        )
        p.add_argument("--output", default=None, help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        if name == "verify":
            p.add_argument(
                "--suite",
                default=None,
                help="comma-separated subset of the scenario's suites to run",
            )
    return parser


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_verify(scenario: Scenario, args) -> int:
    names = list(scenario.suites)
    if args.suite:
        requested = [s.strip() for s in args.suite.split(",") if s.strip()]
        unknown = [s for s in requested if s not in names]
        if unknown:
            raise ConfigError(
                f"--suite {unknown} not in this scenario's suites {names}"
            )
        names = requested
    checks = run_suites(scenario, names, seed=scenario.seed)
    passed = sum(1 for c in checks if c.passed)

    def entry(c):
        d = asdict(c)
        d["pass"] = d.pop("passed")
        return d

    report = {
        "scenario": scenario.name,
        "seed": scenario.seed,
        "suites": names,
        "checks": [entry(c) for c in checks],
        "summary": {
            "total": len(checks),
            "passed": passed,
            "failed": len(checks) - passed,
            "all_pass": passed == len(checks),
        },
    }
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return 0 if passed == len(checks) else 1


def _trajectory_from_scenario(scenario: Scenario):
    flow = scenario.flow
    if flow is None:
        raise ConfigError("flow: section missing from scenario")

    monitors = []
    structure = scenario.structure
    for name in flow.monitors:
        if name == "G":
            if scenario.algebra is not None and scenario.g_pairing_vec is not None:
                monitors.append(pairing_monitor(scenario.algebra, scenario.g_pairing_vec))
            elif scenario.g_fn is not None:
                monitors.append(("G", scenario.g_fn.value))
            else:
                raise ConfigError("flow.monitors: G requested but no G section present")
        elif name == "casimirs":
            if structure is not None:
                monitors.extend(casimir_monitors(structure.casimirs))
        elif name == "field_norm":
            pass  # attached below, once the field callable exists
        else:
            raise ConfigError(f"flow.monitors: unknown monitor {name!r}")

    if flow.field == "brockett":
        if scenario.algebra is None or scenario.g_pairing_vec is None:
            raise ConfigError("flow.field=brockett requires an algebra and a pairing G")
        if "field_norm" in flow.monitors:
            alg = scenario.algebra
            n_vec = scenario.g_pairing_vec
            monitors.append(
                ("field_norm", lambda x: float(np.linalg.norm(alg.bracket(x, alg.bracket(x, n_vec)))))
            )
        return brockett_flow(
            scenario.algebra,
            scenario.g_pairing_vec,
            flow.x0,
            flow.h,
            flow.t_final,
            monitors=monitors,
            method=flow.method,
        )

    if flow.field == "hamiltonian":
        if structure is None or scenario.g_fn is None:
            raise ConfigError("flow.field=hamiltonian requires poisson and G sections")
        field = hamiltonian_field(structure, scenario.g_fn)
    else:  # double_bracket
        if structure is None or scenario.metric is None or scenario.g_fn is None:
            raise ConfigError("flow.field=double_bracket requires metric, poisson and G sections")
        field = lambda x: double_bracket_field(scenario.metric, structure, scenario.g_fn, x)
    if "field_norm" in flow.monitors:
        monitors.append(field_norm_monitor(field))
    return integrate(field, flow.x0, flow.h, flow.t_final, monitors=monitors)


def _cmd_flow(scenario: Scenario, args) -> int:
    trajectory = _trajectory_from_scenario(scenario)

    if args.output is None:
        write_trajectory_csv(trajectory, sys.stdout)
        out = sys.stderr  # keep stdout clean: it carries the CSV
    else:
        write_trajectory_csv(trajectory, args.output)
        out = sys.stdout

    final = trajectory.final
    print(f"final state: {[float(v) for v in final]}", file=out)
    if scenario.algebra is not None and scenario.g_pairing_vec is not None:
        report = equilibrium_report(scenario.algebra, scenario.g_pairing_vec, trajectory)
        print(f"final bracket norm: {report.final_bracket_norm!r}", file=out)
        print(f"G direction: {report.g_direction} (monotone: {report.g_monotone})", file=out)
        # regularity diagnostic for N; interpretation is left to the caller
        kernel, _ = ad_kernel_image(scenario.algebra, scenario.g_pairing_vec)
        print(f"dim ker ad_N: {kernel.shape[1]}", file=out)
    drifts = {
        name: float(np.max(np.abs(values - values[0])))
        for name, values in trajectory.monitors.items()
        if name.startswith("C")
    }
    if drifts:
        print(f"casimir drift: {drifts}", file=out)
    return 0


def _cmd_leaf_metric(scenario: Scenario, args) -> int:
    if scenario.chart is None or scenario.grid is None:
        raise ConfigError("leaf-metric needs chart and grid sections")
    if scenario.metric is None or scenario.structure is None:
        raise ConfigError("leaf-metric needs metric and poisson sections")
    chart, grid = scenario.chart, scenario.grid
    d = chart.leaf_dim

    header = [f"u{i + 1}" for i in range(d)]
    for tag in ("g_ind", "omega", "tau"):
        header += [f"{tag}_{a + 1}{b + 1}" for a in range(d) for b in range(d)]
    header.append("error")

    lines = [",".join(header)]
    for u in grid_points(grid.ranges, grid.resolution):
        cells = [repr(float(v)) for v in u]
        tag = ""
        values: list[float] = []
        if not chart.contains(u):
            tag = "OutsideDomain"
        else:
            try:
                report = leaf_metric_report(scenario.metric, scenario.structure, chart, u)
                values = (
                    [float(v) for v in report.g_ind.ravel()]
                    + [float(v) for v in report.omega.ravel()]
                    + [float(v) for v in report.tau.ravel()]
                )
            except DegenerateInducedMetric:
                tag = "DegenerateInducedMetric"
            except NonInvertibleLeafBivector:
                tag = "NonInvertibleLeafBivector"
        if tag:
            values = [float("nan")] * (3 * d * d)
        cells += [repr(v) for v in values]
        cells.append(tag)
        lines.append(",".join(cells))

    _emit("\n".join(lines) + "\n", args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
