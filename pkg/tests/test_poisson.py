"""Lie-Poisson construction, Hamiltonian fields, Casimir and Jacobi checks."""

import numpy as np
import pytest

from doublebracket.algebra import lie_algebra, sl2_rotated, so3
from doublebracket.errors import DegenerateKilling, DimensionMismatch
from doublebracket.poisson import (
    canonical_structure,
    casimir_residual,
    constant_structure,
    hamiltonian_field,
    jacobi_residual,
    lie_poisson,
    polynomial_structure,
)
from doublebracket.scalarfn import constant, coordinate, linear, polynomial, quadratic

S = 1.0 / np.sqrt(2.0)


def golden_sl2_bivector(p):
    x, y, z = p
    return S * np.array([[0.0, z, y], [-z, 0.0, -x], [-y, x, 0.0]])


class TestLiePoisson:
    def test_sl2_rotated_matches_golden(self, rng):
        structure = lie_poisson(sl2_rotated())
        for _ in range(100):
            p = rng.uniform(-2.0, 2.0, 3)
            np.testing.assert_allclose(structure.matrix(p), golden_sl2_bivector(p), atol=1e-14)

    def test_zero_point_gives_zero_matrix(self):
        assert np.all(lie_poisson(so3()).matrix(np.zeros(3)) == 0.0)

    def test_so3_against_brute_force_expansion(self):
        # evaluate k(xi, [k^{ia} e_a, k^{jb} e_b]) with explicit index loops
        alg = so3()
        structure = lie_poisson(alg)
        xi = np.array([1.0, 0.0, 0.0])
        k = alg.killing
        k_inv = np.linalg.inv(k)
        n = alg.dim
        brute = np.zeros((n, n))
        basis = np.eye(n)
        for i in range(n):
            for j in range(n):
                acc = 0.0
                for a in range(n):
                    for b in range(n):
                        comm = alg.bracket(basis[a], basis[b])
                        acc += k_inv[i, a] * k_inv[j, b] * float(xi @ k @ comm)
                brute[i, j] = acc
        np.testing.assert_allclose(structure.matrix(xi), brute, atol=1e-14)

    def test_linearity_in_point(self, rng):
        structure = lie_poisson(sl2_rotated())
        for _ in range(50):
            xi = rng.normal(size=3)
            a = rng.normal()
            np.testing.assert_allclose(
                structure.matrix(a * xi), a * structure.matrix(xi), atol=1e-13
            )

    def test_scale_factor(self, rng):
        base = lie_poisson(sl2_rotated())
        scaled = lie_poisson(sl2_rotated(), scale=2.5)
        xi = rng.normal(size=3)
        np.testing.assert_allclose(scaled.matrix(xi), 2.5 * base.matrix(xi), atol=1e-14)

    def test_abelian_rejected(self):
        with pytest.raises(DegenerateKilling):
            lie_poisson(lie_algebra(np.zeros((3, 3, 3))))

    def test_killing_quadratic_registered(self):
        structure = lie_poisson(sl2_rotated())
        assert len(structure.casimirs) == 1
        cas = structure.casimirs[0]
        # k = diag(1, 1, -1), so the registered Casimir is x^2 + y^2 - z^2
        assert cas.value(np.array([0.3, -0.4, 1.1])) == pytest.approx(0.3**2 + 0.4**2 - 1.1**2)


class TestHamiltonianField:
    def test_sl2_height_function(self):
        # H = z: X_H(1, 0, 0) = (0, -1/sqrt(2), 0), matching -[xi, grad H]
        structure = lie_poisson(sl2_rotated())
        field = hamiltonian_field(structure, coordinate(3, 2))
        np.testing.assert_allclose(field(np.array([1.0, 0.0, 0.0])), [0.0, -S, 0.0], atol=1e-15)

    def test_constant_hamiltonian(self, rng):
        structure = lie_poisson(so3())
        field = hamiltonian_field(structure, constant(3, 4.2))
        np.testing.assert_allclose(field(rng.normal(size=3)), 0.0, atol=1e-12)

    def test_canonical_free_particle(self):
        structure = canonical_structure(1)
        h = quadratic(np.array([[0.0, 0.0], [0.0, 0.5]]))  # p^2 / 2
        field = hamiltonian_field(structure, h)
        np.testing.assert_allclose(field(np.array([0.0, 1.0])), [1.0, 0.0], atol=1e-15)

    def test_lie_poisson_consistency(self, rng):
        # Pi dH + [xi, k^{-1} dH] = 0 for linear and quadratic H
        for alg in (sl2_rotated(), so3()):
            structure = lie_poisson(alg)
            for _ in range(100):
                xi = rng.uniform(-1.0, 1.0, alg.dim)
                if rng.random() < 0.5:
                    h = linear(rng.uniform(-1.0, 1.0, alg.dim))
                else:
                    q = rng.uniform(-1.0, 1.0, (alg.dim, alg.dim))
                    h = quadratic(0.5 * (q + q.T))
                dh = h.gradient(xi)
                lhs = structure.matrix(xi) @ dh + alg.bracket(xi, alg.gradient(dh))
                assert np.max(np.abs(lhs)) <= 1e-11

    def test_casimir_field_vanishes(self, rng):
        structure = lie_poisson(sl2_rotated())
        field = hamiltonian_field(structure, structure.casimirs[0])
        for _ in range(20):
            assert np.linalg.norm(field(rng.uniform(-1, 1, 3))) <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            hamiltonian_field(canonical_structure(1), coordinate(3, 0))


class TestCasimirResidual:
    def test_sl2_hyperboloid_casimir(self, rng):
        structure = lie_poisson(sl2_rotated())
        cas = polynomial(3, [(1.0, [2, 0, 0]), (1.0, [0, 2, 0]), (-1.0, [0, 0, 2])])
        points = [rng.uniform(-2.0, 2.0, 3) for _ in range(100)]
        assert casimir_residual(structure, cas, points) <= 1e-12

    def test_constant_function(self, rng):
        structure = lie_poisson(so3())
        points = [rng.normal(size=3) for _ in range(10)]
        assert casimir_residual(structure, constant(3, 1.0), points) == 0.0

    def test_momentum_is_not_a_casimir(self):
        structure = canonical_structure(1)
        residual = casimir_residual(structure, coordinate(2, 1), [np.array([0.3, -0.8])])
        assert residual == pytest.approx(1.0)

    def test_registration_rejects_non_casimir(self):
        structure = canonical_structure(1)
        with pytest.raises(ValueError):
            structure.with_casimir(coordinate(2, 1), check_points=[np.zeros(2)])

    def test_registration_accepts_casimir(self, rng):
        structure = lie_poisson(so3())
        sphere = polynomial(3, [(1.0, [2, 0, 0]), (1.0, [0, 2, 0]), (1.0, [0, 0, 2])])
        extended = structure.with_casimir(sphere, check_points=[rng.normal(size=3)])
        assert len(extended.casimirs) == 2


class TestJacobiResidual:
    def test_constant_bivector(self):
        structure = canonical_structure(2)
        fns = [coordinate(4, i) for i in range(3)]
        r = jacobi_residual(structure, np.array([0.1, -0.2, 0.3, 0.4]), *fns)
        assert r <= 1e-10

    def test_lie_poisson_satisfies_jacobi_up_to_fd_floor(self):
        structure = lie_poisson(sl2_rotated())
        fns = [coordinate(3, i) for i in range(3)]
        r = jacobi_residual(structure, np.array([0.3, -0.2, 1.1]), *fns)
        assert r <= 5e-8

    def test_non_poisson_field_detected(self):
        # Pi^12 = 1, Pi^13 = x1^2: the cyclic sum of coordinate brackets is
        # 2 x1 by hand expansion, so the residual at x1 = 1 must be about 2.
        structure = polynomial_structure(
            3,
            {
                (0, 1): [(1.0, [0, 0, 0])],
                (0, 2): [(1.0, [2, 0, 0])],
            },
        )
        fns = [coordinate(3, i) for i in range(3)]
        r = jacobi_residual(structure, np.array([1.0, 0.5, -0.3]), *fns)
        assert r > 0.1
        assert r == pytest.approx(2.0, abs=1e-6)

    def test_step_bounds(self):
        structure = canonical_structure(1)
        fns = [coordinate(2, 0), coordinate(2, 1), coordinate(2, 0)]
        with pytest.raises(ValueError):
            jacobi_residual(structure, np.zeros(2), *fns, fd_step=1e-2)


class TestStructureBasics:
    def test_bracket_antisymmetry_is_exact(self, rng):
        # bitwise equality, not a tolerance: the pairing is built so that
        # swapping arguments negates every summand
        structure = lie_poisson(so3())
        for _ in range(200):
            f = linear(rng.normal(size=3))
            g = linear(rng.normal(size=3))
            x = rng.normal(size=3) * rng.choice([1e-8, 1.0, 1e8])
            assert structure.bracket(f, g, x) == -structure.bracket(g, f, x)

    def test_bracket_matches_bilinear_form(self, rng):
        structure = lie_poisson(sl2_rotated())
        for _ in range(50):
            f = linear(rng.normal(size=3))
            g = linear(rng.normal(size=3))
            x = rng.normal(size=3)
            direct = float(f.gradient(x) @ structure.matrix(x) @ g.gradient(x))
            assert structure.bracket(f, g, x) == pytest.approx(direct, abs=1e-13)

    def test_polynomial_structure_antisymmetry(self, rng):
        structure = polynomial_structure(3, {(0, 1): [(1.0, [0, 0, 1])]})
        pi = structure.matrix(rng.normal(size=3))
        assert np.all(pi == -pi.T)

    def test_constant_structure_validation(self):
        with pytest.raises(ValueError):
            constant_structure(np.eye(2))
