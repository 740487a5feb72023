"""Fixed-step integration of the package's vector fields with monitors.

Only classical 4th-order Runge-Kutta with a fixed step is provided:
reproducibility and clean convergence-order checks matter more here than
speed or stiffness robustness.  The requested horizon T is split into
round(T / h) equal steps, so the effective step can differ from h by a
rounding adjustment (it is reported in the trajectory's time grid).

The Brockett flow L' = [L, [L, N]] has a dedicated entry point that runs on
the compiled kernel when available; ``method="cometric"`` integrates the
same trajectory through the generalized double bracket field instead, which
gives an independent path for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import backends
from .algebra import LieAlgebra
from .cometric import double_bracket_field, killing_metric
from .errors import NonFiniteState, StepTooLarge
from .poisson import lie_poisson
from .scalarfn import ScalarFunction, metric_pairing

Monitor = tuple[str, Callable[[np.ndarray], float]]


@dataclass
class Trajectory:
    """Time grid, states (one row per step) and named monitor channels."""

    times: np.ndarray
    states: np.ndarray
    monitors: dict[str, np.ndarray]

    @property
    def initial(self) -> np.ndarray:
        return self.states[0]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _resolve_steps(h: float, t_final: float) -> tuple[int, float]:
    if h <= 0.0:
        raise ValueError(f"step size must be positive, got {h}")
    if t_final < 0.0:
        raise ValueError(f"horizon must be nonnegative, got {t_final}")
    if t_final == 0.0:
        return 0, h
    n_steps = max(1, int(round(t_final / h)))
    return n_steps, t_final / n_steps


def _check_step(prev: np.ndarray, new: np.ndarray, step: int) -> None:
    if not np.all(np.isfinite(new)):
        raise NonFiniteState(f"state became non-finite at step {step}", step)
    jump = float(np.linalg.norm(new - prev))
    if jump > 10.0 * float(np.linalg.norm(prev)) + 10.0:
        raise StepTooLarge(
            f"step {step} moved the state by {jump:.3e}; reduce the step size", step
        )


def _attach_monitors(states: np.ndarray, monitors: Sequence[Monitor]) -> dict[str, np.ndarray]:
    return {
        name: np.array([float(fn(state)) for state in states]) for name, fn in monitors
    }


def integrate(
    field: Callable[[np.ndarray], np.ndarray],
    x0,
    h: float,
    t_final: float,
    monitors: Sequence[Monitor] = (),
) -> Trajectory:
    """RK4 integration of dx/dt = field(x) with per-step sanity checks.

    Monitor channels are evaluated at the initial state and at every accepted
    step.  Raises NonFiniteState or StepTooLarge with the offending step
    index.
    """
    x0 = np.asarray(x0, dtype=float)
    n_steps, h_eff = _resolve_steps(h, t_final)
    states = np.empty((n_steps + 1, x0.size))
    states[0] = x0
    x = x0
    for step in range(n_steps):
        k1 = np.asarray(field(x), dtype=float)
        k2 = np.asarray(field(x + 0.5 * h_eff * k1), dtype=float)
        k3 = np.asarray(field(x + 0.5 * h_eff * k2), dtype=float)
        k4 = np.asarray(field(x + h_eff * k3), dtype=float)
        new = x + (h_eff / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _check_step(x, new, step)
        states[step + 1] = new
        x = new
    times = np.arange(n_steps + 1) * h_eff
    return Trajectory(times=times, states=states, monitors=_attach_monitors(states, monitors))


def brockett_flow(
    alg: LieAlgebra,
    n_vec,
    l0,
    h: float,
    t_final: float,
    monitors: Sequence[Monitor] = (),
    method: str = "lie",
) -> Trajectory:
    """Integrate L' = [L, [L, N]] from L0.

    ``method="lie"`` iterates the bracket directly (compiled kernel when
    built); ``method="cometric"`` drives the generalized double bracket field
    of G = k(. , N) with the Killing metric and Lie-Poisson bivector.  The
    two paths agree within integrator roundoff and are compared by the test
    suite.
    """
    n_vec = np.asarray(n_vec, dtype=float)
    l0 = np.asarray(l0, dtype=float)
    if method == "cometric":
        metric = killing_metric(alg)
        structure = lie_poisson(alg)
        g_fn = metric_pairing(alg.killing, n_vec)
        return integrate(
            lambda x: double_bracket_field(metric, structure, g_fn, x),
            l0,
            h,
            t_final,
            monitors,
        )
    if method != "lie":
        raise ValueError(f"unknown method {method!r}; use 'lie' or 'cometric'")

    n_steps, h_eff = _resolve_steps(h, t_final)
    states = backends.brockett_rk4(alg.constants, n_vec, l0, h_eff, n_steps)
    bad = np.flatnonzero(~np.all(np.isfinite(states), axis=1))
    if bad.size:
        step = int(bad[0]) - 1
        raise NonFiniteState(f"state became non-finite at step {step}", step)
    for step in range(n_steps):
        jump = float(np.linalg.norm(states[step + 1] - states[step]))
        if jump > 10.0 * float(np.linalg.norm(states[step])) + 10.0:
            raise StepTooLarge(
                f"step {step} moved the state by {jump:.3e}; reduce the step size", step
            )
    times = np.arange(n_steps + 1) * h_eff
    return Trajectory(times=times, states=states, monitors=_attach_monitors(states, monitors))


def pairing_monitor(alg: LieAlgebra, n_vec, name: str = "G") -> Monitor:
    """Monitor channel for G(L) = k(L, N)."""
    fn = metric_pairing(alg.killing, n_vec)
    return (name, fn.value)


def casimir_monitors(casimirs: Sequence[ScalarFunction]) -> list[Monitor]:
    return [(f"C{i + 1}", c.value) for i, c in enumerate(casimirs)]


def field_norm_monitor(field: Callable[[np.ndarray], np.ndarray]) -> Monitor:
    return ("field_norm", lambda x: float(np.linalg.norm(field(x))))


@dataclass(frozen=True)
class EquilibriumReport:
    final_bracket_norm: float
    g_monotone: bool | None  # None when the Killing form is indefinite
    g_direction: str  # nondecreasing | nonincreasing | constant | not_applicable
    converged: bool


def equilibrium_report(
    alg: LieAlgebra,
    n_vec,
    trajectory: Trajectory,
    threshold: float = 1e-6,
    step_tol: float = 1e-10,
) -> EquilibriumReport:
    """Convergence diagnostics for a double-bracket run.

    G = k(L, N) must be nondecreasing along the flow when the Killing form is
    negative definite and nonincreasing when positive definite; for an
    indefinite Killing form no direction is implied and the monotonicity
    check is reported as not applicable.  ``threshold`` is a tool knob for
    the equilibrium test on |[L_final, N]|, not a convergence claim.
    """
    if trajectory.states.shape[0] == 0:
        raise ValueError("empty trajectory")
    n_vec = np.asarray(n_vec, dtype=float)
    final_norm = float(np.linalg.norm(alg.bracket(trajectory.final, n_vec)))
    converged = final_norm <= threshold

    g_values = trajectory.states @ (alg.killing @ n_vec)
    diffs = np.diff(g_values)
    g_scale = 1.0 + float(np.max(np.abs(g_values)))

    n_plus, n_minus = alg.killing_signature
    if n_plus > 0 and n_minus > 0:
        return EquilibriumReport(final_norm, None, "not_applicable", converged)
    if diffs.size == 0 or float(np.max(np.abs(diffs))) <= 1e-12 * g_scale:
        return EquilibriumReport(final_norm, True, "constant", converged)
    if n_minus == alg.dim:  # negative definite: descent field increases G
        monotone = bool(np.all(diffs >= -step_tol))
        return EquilibriumReport(final_norm, monotone, "nondecreasing", converged)
    monotone = bool(np.all(diffs <= step_tol))
    return EquilibriumReport(final_norm, monotone, "nonincreasing", converged)


def write_trajectory_csv(trajectory: Trajectory, path_or_file, decimate: int = 1) -> None:
    """Write `t, x1..xn, <channels>` rows with round-trip float formatting.

    Channels are ordered G first, then C1..Ck, then everything else, matching
    the column layout documented for the command-line exporter.  ``decimate``
    keeps every k-th row (the final row is always written).
    """
    if decimate < 1:
        raise ValueError("decimate must be >= 1")
    names = sorted(
        trajectory.monitors,
        key=lambda s: (s != "G", not (s.startswith("C") and s[1:].isdigit()), s),
    )
    dim = trajectory.states.shape[1]
    header = ["t"] + [f"x{i + 1}" for i in range(dim)] + names
    rows = list(range(0, trajectory.times.size, decimate))
    if rows and rows[-1] != trajectory.times.size - 1:
        rows.append(trajectory.times.size - 1)

    own = not hasattr(path_or_file, "write")
    fh = open(path_or_file, "w", encoding="utf-8", newline="") if own else path_or_file
    try:
        fh.write(",".join(header) + "\n")
        for i in rows:
            cells = [repr(float(trajectory.times[i]))]
            cells += [repr(float(v)) for v in trajectory.states[i]]
            cells += [repr(float(trajectory.monitors[name][i])) for name in names]
            fh.write(",".join(cells) + "\n")
    finally:
        if own:
            fh.close()
