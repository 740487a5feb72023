"""Leaf charts: explicit parametrizations of symplectic leaves.

A chart carries both directions: ``to_ambient`` (the parametrization
phi: R^d -> R^n) and ``to_chart`` (coordinate functions F: R^n -> R^d
defined on an ambient neighbourhood with F o phi = id).  The ambient
extension is part of the contract because restricting the coupling tensor
needs the ambient differentials dF^a; it also avoids pseudo-inverses of the
parametrization Jacobian in the hot path.

Built-ins: the stereographic disc chart of the upper hyperboloid sheet, the
trigonometric charts of the two-sheeted (`hyperboloid_sheet`) and
one-sheeted (`one_sheet`) hyperboloids, the degenerate cone, spherical
orbit charts for so(3), the product-of-spheres orbit chart for split so(4),
the identity chart of canonical R^2n, and a builder for user formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import exprtree
from .errors import DimensionMismatch
from .numdiff import fd_jacobian


@dataclass(frozen=True)
class LeafChart:
    name: str
    ambient_dim: int
    leaf_dim: int
    to_ambient: Callable[[np.ndarray], np.ndarray]
    to_chart: Callable[[np.ndarray], np.ndarray]
    jac_to_ambient: Callable[[np.ndarray], np.ndarray]  # n x d
    jac_to_chart: Callable[[np.ndarray], np.ndarray]  # d x n
    in_domain: Callable[[np.ndarray], bool]
    sample_box: tuple[tuple[float, float], ...]  # box for drawing test points

    def point(self, u) -> np.ndarray:
        u = self._chart_vec(u)
        x = np.asarray(self.to_ambient(u), dtype=float)
        if x.shape != (self.ambient_dim,):
            raise DimensionMismatch(f"parametrization returned shape {x.shape}")
        return x

    def coords(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise DimensionMismatch(f"expected ambient point of dim {self.ambient_dim}")
        return np.asarray(self.to_chart(x), dtype=float)

    def param_jacobian(self, u) -> np.ndarray:
        u = self._chart_vec(u)
        j = np.asarray(self.jac_to_ambient(u), dtype=float)
        if j.shape != (self.ambient_dim, self.leaf_dim):
            raise DimensionMismatch(f"parametrization Jacobian has shape {j.shape}")
        return j

    def coords_jacobian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        j = np.asarray(self.jac_to_chart(x), dtype=float)
        if j.shape != (self.leaf_dim, self.ambient_dim):
            raise DimensionMismatch(f"coordinate Jacobian has shape {j.shape}")
        return j

    def contains(self, u) -> bool:
        return bool(self.in_domain(self._chart_vec(u)))

    def _chart_vec(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.leaf_dim,):
            raise DimensionMismatch(f"expected chart point of dim {self.leaf_dim}")
        return u


def _make_chart(
    name: str,
    ambient_dim: int,
    leaf_dim: int,
    phi,
    coord_map,
    jac_phi=None,
    jac_coord_map=None,
    domain=None,
    sample_box=None,
) -> LeafChart:
    if jac_phi is None:
        jac_phi = lambda u: fd_jacobian(phi, u)
    if jac_coord_map is None:
        jac_coord_map = lambda x: fd_jacobian(coord_map, x)
    if domain is None:
        domain = lambda u: True
    if sample_box is None:
        sample_box = tuple((-1.0, 1.0) for _ in range(leaf_dim))
    return LeafChart(
        name=name,
        ambient_dim=ambient_dim,
        leaf_dim=leaf_dim,
        to_ambient=lambda u: np.asarray(phi(u), dtype=float),
        to_chart=lambda x: np.asarray(coord_map(x), dtype=float),
        jac_to_ambient=jac_phi,
        jac_to_chart=jac_coord_map,
        in_domain=domain,
        sample_box=tuple((float(a), float(b)) for a, b in sample_box),
    )


def with_fd_jacobians(chart: LeafChart) -> LeafChart:
    """Same chart with both Jacobians replaced by finite differences."""
    return LeafChart(
        name=chart.name + "(fd)",
        ambient_dim=chart.ambient_dim,
        leaf_dim=chart.leaf_dim,
        to_ambient=chart.to_ambient,
        to_chart=chart.to_chart,
        jac_to_ambient=lambda u: fd_jacobian(chart.to_ambient, u),
        jac_to_chart=lambda x: fd_jacobian(chart.to_chart, x),
        in_domain=chart.in_domain,
        sample_box=chart.sample_box,
    )


# ---------------------------------------------------------------------------
# sl(2, R) leaves in the (x, y, z) basis, Casimir x^2 + y^2 - z^2
# ---------------------------------------------------------------------------


def stereographic_disc() -> LeafChart:
    """Upper sheet of x^2 + y^2 - z^2 = -1 through the open unit disc.

    Chart coordinates (u, v) = (x, y) / (1 + z), projection centred at
    (0, 0, -1); the inverse lift is (s u, s v, s - 1) with
    s = 2 / (1 - u^2 - v^2).
    """

    def phi(u):
        r2 = u[0] ** 2 + u[1] ** 2
        s = 2.0 / (1.0 - r2)
        return np.array([s * u[0], s * u[1], s - 1.0])

    def coord_map(x):
        return np.array([x[0] / (1.0 + x[2]), x[1] / (1.0 + x[2])])

    def jac_phi(u):
        r2 = u[0] ** 2 + u[1] ** 2
        s = 2.0 / (1.0 - r2)
        # ds/du_i = s^2 u_i
        du = s * s * u[0]
        dv = s * s * u[1]
        return np.array(
            [
                [s + du * u[0], dv * u[0]],
                [du * u[1], s + dv * u[1]],
                [du, dv],
            ]
        )

    def jac_coord_map(x):
        w = 1.0 + x[2]
        return np.array(
            [
                [1.0 / w, 0.0, -x[0] / w**2],
                [0.0, 1.0 / w, -x[1] / w**2],
            ]
        )

    return _make_chart(
        "h2_stereographic",
        3,
        2,
        phi,
        coord_map,
        jac_phi,
        jac_coord_map,
        domain=lambda u: u[0] ** 2 + u[1] ** 2 < 1.0,
        sample_box=((-0.6, 0.6), (-0.6, 0.6)),
    )


def hyperboloid_sheet(c: float = 1.0) -> LeafChart:
    """Upper sheet of x^2 + y^2 - z^2 = -c^2 in (angle, rapidity) coordinates:
    (x, y, z) = c (sinh v cos u, sinh v sin u, cosh v), v > 0."""
    c = float(c)

    def phi(u):
        ang, nu = u
        return np.array(
            [c * math.sinh(nu) * math.cos(ang), c * math.sinh(nu) * math.sin(ang), c * math.cosh(nu)]
        )

    def coord_map(x):
        return np.array([math.atan2(x[1], x[0]), math.acosh(x[2] / c)])

    def jac_phi(u):
        ang, nu = u
        return np.array(
            [
                [-c * math.sinh(nu) * math.sin(ang), c * math.cosh(nu) * math.cos(ang)],
                [c * math.sinh(nu) * math.cos(ang), c * math.cosh(nu) * math.sin(ang)],
                [0.0, c * math.sinh(nu)],
            ]
        )

    def jac_coord_map(x):
        rho2 = x[0] ** 2 + x[1] ** 2
        w = x[2] / c
        dnu = 1.0 / (c * math.sqrt(w * w - 1.0))
        return np.array(
            [
                [-x[1] / rho2, x[0] / rho2, 0.0],
                [0.0, 0.0, dnu],
            ]
        )

    return _make_chart(
        f"h2_sheet(c={c})",
        3,
        2,
        phi,
        coord_map,
        jac_phi,
        jac_coord_map,
        domain=lambda u: u[1] > 0.0 and -math.pi < u[0] < math.pi,
        sample_box=((-2.8, 2.8), (0.2, 1.5)),
    )


def one_sheet(l: float = 1.0) -> LeafChart:
    """One-sheeted hyperboloid x^2 + y^2 - z^2 = l^2:
    (x, y, z) = l (cosh v cos u, cosh v sin u, sinh v)."""
    l = float(l)

    def phi(u):
        ang, nu = u
        return np.array(
            [l * math.cosh(nu) * math.cos(ang), l * math.cosh(nu) * math.sin(ang), l * math.sinh(nu)]
        )

    def coord_map(x):
        return np.array([math.atan2(x[1], x[0]), math.asinh(x[2] / l)])

    def jac_phi(u):
        ang, nu = u
        return np.array(
            [
                [-l * math.cosh(nu) * math.sin(ang), l * math.sinh(nu) * math.cos(ang)],
                [l * math.cosh(nu) * math.cos(ang), l * math.sinh(nu) * math.sin(ang)],
                [0.0, l * math.cosh(nu)],
            ]
        )

    def jac_coord_map(x):
        rho2 = x[0] ** 2 + x[1] ** 2
        w = x[2] / l
        dnu = 1.0 / (l * math.sqrt(w * w + 1.0))
        return np.array(
            [
                [-x[1] / rho2, x[0] / rho2, 0.0],
                [0.0, 0.0, dnu],
            ]
        )

    return _make_chart(
        f"one_sheet(l={l})",
        3,
        2,
        phi,
        coord_map,
        jac_phi,
        jac_coord_map,
        domain=lambda u: -math.pi < u[0] < math.pi,
        sample_box=((-2.8, 2.8), (-1.2, 1.2)),
    )


def cone_chart() -> LeafChart:
    """Upper half-cone x^2 + y^2 = z^2, z > 0, coordinates (t, u) with
    (x, y, z) = (t cos u, t sin u, t).  The induced Killing metric is
    degenerate everywhere on this leaf."""

    def phi(u):
        t, ang = u
        return np.array([t * math.cos(ang), t * math.sin(ang), t])

    def coord_map(x):
        return np.array([x[2], math.atan2(x[1], x[0])])

    def jac_phi(u):
        t, ang = u
        return np.array(
            [
                [math.cos(ang), -t * math.sin(ang)],
                [math.sin(ang), t * math.cos(ang)],
                [1.0, 0.0],
            ]
        )

    def jac_coord_map(x):
        rho2 = x[0] ** 2 + x[1] ** 2
        return np.array(
            [
                [0.0, 0.0, 1.0],
                [-x[1] / rho2, x[0] / rho2, 0.0],
            ]
        )

    return _make_chart(
        "cone",
        3,
        2,
        phi,
        coord_map,
        jac_phi,
        jac_coord_map,
        domain=lambda u: u[0] > 0.0 and -math.pi < u[1] < math.pi,
        sample_box=((0.2, 2.0), (-2.8, 2.8)),
    )


# ---------------------------------------------------------------------------
# compact orbits
# ---------------------------------------------------------------------------


def sphere_chart(radius: float = 1.0) -> LeafChart:
    """Sphere |xi| = radius in spherical angles (theta, varphi), poles
    excluded.  Adjoint orbit of so(3)."""
    r = float(radius)

    def phi(u):
        th, ph = u
        return np.array(
            [r * math.sin(th) * math.cos(ph), r * math.sin(th) * math.sin(ph), r * math.cos(th)]
        )

    def coord_map(x):
        rho = math.hypot(x[0], x[1])
        return np.array([math.atan2(rho, x[2]), math.atan2(x[1], x[0])])

    def jac_phi(u):
        th, ph = u
        return np.array(
            [
                [r * math.cos(th) * math.cos(ph), -r * math.sin(th) * math.sin(ph)],
                [r * math.cos(th) * math.sin(ph), r * math.sin(th) * math.cos(ph)],
                [-r * math.sin(th), 0.0],
            ]
        )

    def jac_coord_map(x):
        rho = math.hypot(x[0], x[1])
        rr2 = rho * rho + x[2] ** 2
        return np.array(
            [
                [x[2] * x[0] / (rho * rr2), x[2] * x[1] / (rho * rr2), -rho / rr2],
                [-x[1] / (rho * rho), x[0] / (rho * rho), 0.0],
            ]
        )

    return _make_chart(
        f"sphere(r={r})",
        3,
        2,
        phi,
        coord_map,
        jac_phi,
        jac_coord_map,
        domain=lambda u: 0.0 < u[0] < math.pi and -math.pi < u[1] < math.pi,
        sample_box=((0.35, math.pi - 0.35), (-2.8, 2.8)),
    )


def product_sphere_chart(r_plus: float = 1.0, r_minus: float = 0.5) -> LeafChart:
    """Regular orbit of split so(4): product of two spheres in R^3 x R^3,
    angles (theta1, phi1, theta2, phi2)."""
    s1 = sphere_chart(r_plus)
    s2 = sphere_chart(r_minus)

    def phi(u):
        return np.concatenate([s1.to_ambient(u[:2]), s2.to_ambient(u[2:])])

    def coord_map(x):
        return np.concatenate([s1.to_chart(x[:3]), s2.to_chart(x[3:])])

    def jac_phi(u):
        j = np.zeros((6, 4))
        j[:3, :2] = s1.jac_to_ambient(u[:2])
        j[3:, 2:] = s2.jac_to_ambient(u[2:])
        return j

    def jac_coord_map(x):
        j = np.zeros((4, 6))
        j[:2, :3] = s1.jac_to_chart(x[:3])
        j[2:, 3:] = s2.jac_to_chart(x[3:])
        return j

    def domain(u):
        return s1.in_domain(u[:2]) and s2.in_domain(u[2:])

    return _make_chart(
        f"product_sphere(r+={r_plus}, r-={r_minus})",
        6,
        4,
        phi,
        coord_map,
        jac_phi,
        jac_coord_map,
        domain=domain,
        sample_box=s1.sample_box + s2.sample_box,
    )


def identity_chart(n: int) -> LeafChart:
    """R^n as its own (global, flat) chart; used with canonical bivectors."""
    eye = np.eye(n)
    return _make_chart(
        f"identity(n={n})",
        n,
        n,
        lambda u: np.asarray(u, dtype=float),
        lambda x: np.asarray(x, dtype=float),
        lambda u: eye.copy(),
        lambda x: eye.copy(),
        sample_box=tuple((-1.0, 1.0) for _ in range(n)),
    )


def expression_chart(
    phi_exprs: Sequence[str],
    coord_exprs: Sequence[str],
    sample_box=None,
    name: str = "custom",
) -> LeafChart:
    """Chart from user formulas; Jacobians fall back to finite differences.

    ``phi_exprs`` use variables u1..ud; ``coord_exprs`` use x1..xn.
    """
    d = len(coord_exprs)
    n = len(phi_exprs)
    phi = exprtree.compile_vector(list(phi_exprs), [f"u{i + 1}" for i in range(d)])
    coord = exprtree.compile_vector(list(coord_exprs), [f"x{i + 1}" for i in range(n)])
    return _make_chart(
        name,
        n,
        d,
        lambda u: np.asarray(phi(u), dtype=float),
        lambda x: np.asarray(coord(x), dtype=float),
        sample_box=sample_box,
    )


def chart_consistency(chart: LeafChart, points) -> dict[str, float]:
    """Worst-case residuals of F(phi(u)) = u and jac_F jac_phi = I over the
    supplied chart points."""
    round_trip = 0.0
    jacobian = 0.0
    for u in points:
        u = np.asarray(u, dtype=float)
        x = chart.point(u)
        round_trip = max(round_trip, float(np.max(np.abs(chart.coords(x) - u))))
        prod = chart.coords_jacobian(x) @ chart.param_jacobian(u)
        jacobian = max(jacobian, float(np.max(np.abs(prod - np.eye(chart.leaf_dim)))))
    return {"round_trip": round_trip, "jacobian": jacobian}


def casimir_spread(chart: LeafChart, fns, points) -> float:
    """Largest variation of any function in ``fns`` along the chart; used to
    confirm Casimirs are constant on the leaf."""
    worst = 0.0
    pts = [np.asarray(u, dtype=float) for u in points]
    if not pts:
        return 0.0
    for f in fns:
        base = f.value(chart.point(pts[0]))
        for u in pts[1:]:
            worst = max(worst, abs(f.value(chart.point(u)) - base))
    return worst


def grid_points(ranges, resolution) -> list[np.ndarray]:
    """Row-major cartesian grid over the given ranges."""
    axes = [np.linspace(lo, hi, int(res)) for (lo, hi), res in zip(ranges, resolution)]
    mesh = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([m.ravel() for m in mesh], axis=1)
    return [flat[i] for i in range(flat.shape[0])]


def sample_chart_points(chart: LeafChart, rng: np.random.Generator, count: int) -> list[np.ndarray]:
    """Draw chart points uniformly from the sample box, rejecting points
    outside the chart domain."""
    lo = np.array([a for a, _ in chart.sample_box])
    hi = np.array([b for _, b in chart.sample_box])
    out: list[np.ndarray] = []
    while len(out) < count:
        u = lo + (hi - lo) * rng.random(chart.leaf_dim)
        if chart.contains(u):
            out.append(u)
    return out
