"""Fixed-step integration, the Brockett flow, and conservation monitors."""

import io
import math

import numpy as np
import pytest

from doublebracket.algebra import sl2_rotated, so3
from doublebracket.errors import NonFiniteState, StepTooLarge
from doublebracket.flow import (
    brockett_flow,
    casimir_monitors,
    equilibrium_report,
    integrate,
    pairing_monitor,
    write_trajectory_csv,
)
from doublebracket.poisson import canonical_structure, hamiltonian_field, lie_poisson
from doublebracket.scalarfn import quadratic

TWO_PI = 2.0 * math.pi


def oscillator_field():
    # H = (q^2 + p^2) / 2 on canonical R^2: the flow is a pure rotation
    structure = canonical_structure(1)
    return hamiltonian_field(structure, quadratic(0.5 * np.eye(2)))


class TestIntegrate:
    def test_zero_field_constant_trajectory(self):
        traj = integrate(lambda x: np.zeros(3), [1.0, -2.0, 0.5], 0.1, 5.0)
        assert traj.states.shape == (51, 3)
        assert np.all(traj.states == traj.states[0])
        np.testing.assert_allclose(np.diff(traj.times), 0.1, atol=1e-15)

    def test_initial_state_stored_exactly(self):
        x0 = np.array([0.123456789, -0.987654321])
        traj = integrate(oscillator_field(), x0, 0.01, 0.1)
        assert np.all(traj.states[0] == x0)

    def test_harmonic_oscillator_returns_to_start(self):
        traj = integrate(oscillator_field(), [0.0, 1.0], 1e-3, TWO_PI)
        assert np.linalg.norm(traj.final - traj.initial) <= 1e-10

    def test_fourth_order_convergence(self):
        # halving the step shrinks the final-state error by about 2^4
        x0 = np.array([0.0, 1.0])
        exact = np.array([math.sin(TWO_PI), math.cos(TWO_PI)])  # = x0
        errors = []
        for n in (64, 128):
            traj = integrate(oscillator_field(), x0, TWO_PI / n, TWO_PI)
            errors.append(np.linalg.norm(traj.final - exact))
        ratio = errors[0] / errors[1]
        assert 12.0 <= ratio <= 20.0

    def test_monitors_sampled_every_step(self):
        traj = integrate(
            oscillator_field(),
            [0.0, 1.0],
            0.01,
            1.0,
            monitors=[("energy", lambda x: 0.5 * float(x @ x))],
        )
        assert traj.monitors["energy"].shape == (101,)
        np.testing.assert_allclose(traj.monitors["energy"], 0.5, atol=1e-10)

    def test_zero_horizon_single_row(self):
        traj = integrate(oscillator_field(), [0.3, 0.4], 0.1, 0.0)
        assert traj.states.shape == (1, 2)
        assert traj.times[0] == 0.0

    def test_non_finite_state_reports_step(self):
        # dp/dt = -p^2 from a huge start overflows inside the first stages
        field = lambda x: np.array([0.0, -x[1] ** 2])
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(NonFiniteState) as err:
                integrate(field, [0.0, -1e200], 0.1, 1.0)
        assert err.value.step == 0

    def test_step_too_large_reports_step(self):
        field = lambda x: np.array([1e9, 0.0])
        with pytest.raises(StepTooLarge) as err:
            integrate(field, [0.0, 0.0], 0.1, 1.0)
        assert err.value.step == 0

    def test_invalid_step(self):
        with pytest.raises(ValueError):
            integrate(oscillator_field(), [0.0, 1.0], -0.1, 1.0)


class TestBrockettFlow:
    def test_commuting_start_is_stationary(self):
        alg = so3()
        e3 = np.array([0.0, 0.0, 1.0])
        traj = brockett_flow(alg, e3, 0.5 * e3, 1e-2, 2.0)
        assert np.max(np.abs(traj.states - traj.states[0])) <= 1e-12

    def test_so3_descends_to_antipode(self):
        # G = k(L, N) = -2 L.N increases along the flow, so L3 decreases:
        # the phase line of the polar angle is theta' = sin(theta), which
        # runs from theta0 = 0.5 to the antipode (0, 0, -1).
        alg = so3()
        n_vec = np.array([0.0, 0.0, 1.0])
        l0 = np.array([math.sin(0.5), 0.0, math.cos(0.5)])
        traj = brockett_flow(alg, n_vec, l0, 1e-2, 50.0)
        np.testing.assert_allclose(traj.final, [0.0, 0.0, -1.0], atol=1e-6)

    def test_norm_is_conserved(self):
        alg = so3()
        traj = brockett_flow(
            alg,
            [0.0, 0.0, 1.0],
            [math.sin(0.5), 0.0, math.cos(0.5)],
            1e-2,
            50.0,
        )
        norms = np.linalg.norm(traj.states, axis=1)
        assert np.max(np.abs(norms - 1.0)) <= 1e-8

    def test_monitor_channels_populated(self):
        alg = so3()
        structure = lie_poisson(alg)
        n_vec = np.array([0.0, 0.0, 1.0])
        monitors = [pairing_monitor(alg, n_vec)] + casimir_monitors(structure.casimirs)
        traj = brockett_flow(alg, n_vec, [0.6, 0.0, 0.8], 1e-3, 5.0, monitors=monitors)
        assert set(traj.monitors) == {"G", "C1"}
        drift = np.max(np.abs(traj.monitors["C1"] - traj.monitors["C1"][0]))
        assert drift <= 1e-8

    def test_casimir_conservation_small_step(self):
        # pure integrator error at order h^4: h <= 1e-3, T <= 10
        alg = so3()
        structure = lie_poisson(alg)
        traj = brockett_flow(
            alg,
            [0.3, -0.4, 0.8],
            [0.6, 0.0, 0.8],
            1e-3,
            10.0,
            monitors=casimir_monitors(structure.casimirs),
        )
        assert np.max(np.abs(traj.monitors["C1"] - traj.monitors["C1"][0])) <= 1e-8

    def test_descent_sign_per_step(self):
        # with a negative-definite Killing form, G = k(L, N) never decreases
        alg = so3()
        n_vec = np.array([0.0, 0.0, 1.0])
        traj = brockett_flow(alg, n_vec, [math.sin(0.5), 0.0, math.cos(0.5)], 1e-2, 50.0)
        g_values = traj.states @ (alg.killing @ n_vec)
        assert np.min(np.diff(g_values)) >= -1e-10

    def test_path_equivalence(self):
        # direct bracket iteration vs the generalized descent field
        alg = so3()
        n_vec = np.array([0.2, -0.1, 0.9])
        l0 = np.array([0.6, 0.0, 0.8])
        lie = brockett_flow(alg, n_vec, l0, 1e-2, 10.0, method="lie")
        cometric = brockett_flow(alg, n_vec, l0, 1e-2, 10.0, method="cometric")
        assert np.max(np.abs(lie.states - cometric.states)) <= 1e-10

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            brockett_flow(so3(), np.ones(3), np.ones(3), 0.1, 1.0, method="magic")


class TestDescentFlow:
    """The generalized descent field -D dG driven through the integrator."""

    def test_sl2_flow_conserves_casimir(self):
        # noncompact case: the flow stays on the hyperboloid leaf
        from doublebracket.cometric import double_bracket_field, killing_metric
        from doublebracket.scalarfn import metric_pairing

        alg = sl2_rotated()
        metric = killing_metric(alg)
        structure = lie_poisson(alg)
        g_fn = metric_pairing(alg.killing, np.array([0.0, 0.0, 1.0]))
        field = lambda x: double_bracket_field(metric, structure, g_fn, x)
        # the hyperboloid is noncompact and G is unbounded along it, so the
        # flow escapes to infinity; keep the horizon where states stay O(1)
        traj = integrate(
            field,
            [0.3, -0.2, np.sqrt(1.0 + 0.09 + 0.04)],
            1e-3,
            2.0,
            monitors=casimir_monitors(structure.casimirs),
        )
        drift = np.max(np.abs(traj.monitors["C1"] - traj.monitors["C1"][0]))
        assert drift <= 1e-8

    def test_sl2_flow_escape_is_detected(self):
        # same field run far past the bounded window trips the step guard
        from doublebracket.cometric import double_bracket_field, killing_metric
        from doublebracket.scalarfn import metric_pairing

        alg = sl2_rotated()
        field = lambda x: double_bracket_field(
            killing_metric(alg), lie_poisson(alg), metric_pairing(alg.killing, [0.0, 0.0, 1.0]), x
        )
        with pytest.raises(StepTooLarge):
            integrate(field, [0.3, -0.2, np.sqrt(1.13)], 1e-3, 10.0)

    def test_descent_sign_under_definite_metric(self, rng):
        # with g positive definite, dG . v_G = -dG^T D dG <= 0, so G decreases
        from doublebracket.cometric import double_bracket_field, euclidean_metric
        from doublebracket.scalarfn import linear

        structure = lie_poisson(so3())
        metric = euclidean_metric(3)
        g_fn = linear(np.array([0.4, -0.3, 0.8]))
        field = lambda x: double_bracket_field(metric, structure, g_fn, x)
        traj = integrate(field, [0.6, 0.0, 0.8], 1e-2, 10.0)
        g_values = traj.states @ g_fn.gradient(np.zeros(3))
        assert np.max(np.diff(g_values)) <= 1e-10


class TestEquilibriumReport:
    def test_converged_so3_run(self):
        alg = so3()
        n_vec = np.array([0.0, 0.0, 1.0])
        traj = brockett_flow(alg, n_vec, [math.sin(0.5), 0.0, math.cos(0.5)], 1e-2, 50.0)
        report = equilibrium_report(alg, n_vec, traj)
        assert report.final_bracket_norm <= 1e-6
        assert report.converged
        assert report.g_monotone is True
        assert report.g_direction == "nondecreasing"

    def test_stationary_run_flagged_constant(self):
        alg = so3()
        e3 = np.array([0.0, 0.0, 1.0])
        traj = brockett_flow(alg, e3, 2.0 * e3, 1e-2, 1.0)
        report = equilibrium_report(alg, e3, traj)
        assert report.g_direction == "constant"
        assert report.g_monotone is True

    def test_indefinite_killing_not_applicable(self):
        alg = sl2_rotated()
        traj = brockett_flow(alg, [0.0, 0.0, 1.0], [0.1, 0.2, 0.05], 1e-3, 1.0)
        report = equilibrium_report(alg, [0.0, 0.0, 1.0], traj)
        assert report.g_monotone is None
        assert report.g_direction == "not_applicable"


class TestCsvExport:
    def test_header_and_roundtrip_precision(self):
        alg = so3()
        n_vec = np.array([0.0, 0.0, 1.0])
        structure = lie_poisson(alg)
        monitors = [pairing_monitor(alg, n_vec)] + casimir_monitors(structure.casimirs)
        traj = brockett_flow(alg, n_vec, [0.6, 0.0, 0.8], 0.1, 1.0, monitors=monitors)
        buf = io.StringIO()
        write_trajectory_csv(traj, buf)
        lines = buf.getvalue().strip().split("\n")
        assert lines[0] == "t,x1,x2,x3,G,C1"
        assert len(lines) == 12
        cells = lines[-1].split(",")
        assert float(cells[1]) == traj.final[0]  # full round-trip precision

    def test_decimation_keeps_last_row(self, tmp_path):
        traj = integrate(oscillator_field(), [0.0, 1.0], 0.01, 1.0)
        path = tmp_path / "traj.csv"
        write_trajectory_csv(traj, path, decimate=7)
        lines = path.read_text().strip().split("\n")
        assert lines[-1].split(",")[0] == repr(float(traj.times[-1]))
