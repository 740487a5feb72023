"""Chart contracts: round trips, Jacobian consistency, expression charts."""

import numpy as np
import pytest

from doublebracket.charts import (
    chart_consistency,
    cone_chart,
    expression_chart,
    grid_points,
    hyperboloid_sheet,
    identity_chart,
    one_sheet,
    product_sphere_chart,
    sample_chart_points,
    sphere_chart,
    stereographic_disc,
    with_fd_jacobians,
)
from doublebracket.exprtree import compile_expression

ALL_CHARTS = [
    stereographic_disc(),
    hyperboloid_sheet(0.5),
    hyperboloid_sheet(1.0),
    hyperboloid_sheet(2.0),
    one_sheet(1.0),
    cone_chart(),
    sphere_chart(1.0),
    product_sphere_chart(1.0, 0.5),
    identity_chart(4),
]


@pytest.mark.parametrize("chart", ALL_CHARTS, ids=lambda c: c.name)
def test_analytic_chart_consistency(chart, rng):
    points = sample_chart_points(chart, rng, 25)
    residuals = chart_consistency(chart, points)
    assert residuals["round_trip"] <= 1e-10
    assert residuals["jacobian"] <= 1e-12


@pytest.mark.parametrize("chart", ALL_CHARTS, ids=lambda c: c.name)
def test_fd_chart_consistency(chart, rng):
    fd = with_fd_jacobians(chart)
    points = sample_chart_points(fd, rng, 10)
    residuals = chart_consistency(fd, points)
    assert residuals["round_trip"] <= 1e-10
    assert residuals["jacobian"] <= 1e-8


@pytest.mark.parametrize("chart", ALL_CHARTS, ids=lambda c: c.name)
def test_fd_jacobians_match_analytic(chart, rng):
    fd = with_fd_jacobians(chart)
    for u in sample_chart_points(chart, rng, 10):
        x = chart.point(u)
        assert np.max(np.abs(fd.jac_to_ambient(u) - chart.param_jacobian(u))) <= 1e-8
        assert np.max(np.abs(fd.jac_to_chart(x) - chart.coords_jacobian(x))) <= 1e-8


def test_disc_chart_lift():
    disc = stereographic_disc()
    np.testing.assert_allclose(disc.point(np.zeros(2)), [0.0, 0.0, 1.0], atol=1e-15)
    u = np.array([0.3, -0.4])
    x = disc.point(u)
    # the lift lands on the upper hyperboloid sheet
    assert x[0] ** 2 + x[1] ** 2 - x[2] ** 2 == pytest.approx(-1.0, abs=1e-12)
    np.testing.assert_allclose(disc.coords(x), u, atol=1e-14)


def test_sheet_and_one_sheet_land_on_their_leaves(rng):
    for c in (0.5, 1.0, 2.0):
        chart = hyperboloid_sheet(c)
        for u in sample_chart_points(chart, rng, 10):
            x = chart.point(u)
            assert x[0] ** 2 + x[1] ** 2 - x[2] ** 2 == pytest.approx(-c * c, rel=1e-12)
    chart = one_sheet(1.5)
    for u in sample_chart_points(chart, rng, 10):
        x = chart.point(u)
        assert x[0] ** 2 + x[1] ** 2 - x[2] ** 2 == pytest.approx(1.5**2, rel=1e-12)


def test_sphere_chart_radius(rng):
    chart = sphere_chart(2.0)
    for u in sample_chart_points(chart, rng, 10):
        assert np.linalg.norm(chart.point(u)) == pytest.approx(2.0, rel=1e-13)


def test_domain_gates():
    assert not stereographic_disc().contains(np.array([0.8, 0.7]))
    assert not cone_chart().contains(np.array([-0.5, 0.0]))
    assert not sphere_chart(1.0).contains(np.array([0.0, 0.0]))


def test_casimir_constancy_along_leaves(rng):
    # registered Casimirs must not vary along any leaf parametrization
    from doublebracket.algebra import sl2_rotated, so3, so4
    from doublebracket.charts import casimir_spread
    from doublebracket.poisson import lie_poisson

    cases = [
        (sl2_rotated(), stereographic_disc()),
        (sl2_rotated(), hyperboloid_sheet(1.0)),
        (sl2_rotated(), one_sheet(1.0)),
        (sl2_rotated(), cone_chart()),
        (so3(), sphere_chart(1.0)),
        (so4(), product_sphere_chart(1.0, 0.5)),
    ]
    for alg, chart in cases:
        structure = lie_poisson(alg)
        points = sample_chart_points(chart, rng, 25)
        assert casimir_spread(chart, structure.casimirs, points) <= 1e-9


def test_grid_points_row_major():
    pts = grid_points([(0.0, 1.0), (0.0, 2.0)], [2, 3])
    assert len(pts) == 6
    np.testing.assert_allclose(pts[0], [0.0, 0.0])
    np.testing.assert_allclose(pts[1], [0.0, 1.0])
    np.testing.assert_allclose(pts[3], [1.0, 0.0])


class TestExpressionChart:
    def test_reproduces_stereographic_disc(self, rng):
        chart = expression_chart(
            [
                "2*u1/(1 - u1**2 - u2**2)",
                "2*u2/(1 - u1**2 - u2**2)",
                "2/(1 - u1**2 - u2**2) - 1",
            ],
            ["x1/(1 + x3)", "x2/(1 + x3)"],
            sample_box=[(-0.6, 0.6), (-0.6, 0.6)],
        )
        builtin = stereographic_disc()
        for u in sample_chart_points(builtin, rng, 10):
            np.testing.assert_allclose(chart.point(u), builtin.point(u), atol=1e-12)
            x = builtin.point(u)
            np.testing.assert_allclose(
                chart.coords_jacobian(x), builtin.coords_jacobian(x), atol=1e-8
            )

    def test_elementary_functions(self):
        f = compile_expression("atan2(x2, x1) + cosh(0.0) + sqrt(4.0)", ["x1", "x2"])
        assert f([1.0, 0.0]) == pytest.approx(3.0)

    def test_rejects_unknown_names(self):
        with pytest.raises(ValueError):
            compile_expression("q + 1", ["x1"])

    def test_rejects_calls_outside_whitelist(self):
        with pytest.raises(ValueError):
            compile_expression("__import__('os')", ["x1"])
        with pytest.raises(ValueError):
            compile_expression("eval('1')", ["x1"])

    def test_rejects_float_powers(self):
        with pytest.raises(ValueError):
            compile_expression("x1**0.5", ["x1"])

    def test_atan2_arity(self):
        with pytest.raises(ValueError):
            compile_expression("atan2(x1)", ["x1"])
