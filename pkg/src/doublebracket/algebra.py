"""Finite-dimensional Lie algebras given by structure constants.

An algebra is stored as the dense array ``constants[k, i, j]``, the
coefficient of e_k in [e_i, e_j].  Construction validates antisymmetry and
the Jacobi identity and caches the Killing matrix k_ij = tr(ad_i ad_j).
Everything downstream (Lie-Poisson structures, double bracket fields,
normal metrics on orbits) is driven by this one object.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import backends
from .errors import (
    AntisymmetryViolation,
    DimensionMismatch,
    JacobiViolation,
    LinearlyDependentBasis,
    NotClosedUnderBracket,
    SingularBasisChange,
)

JACOBI_TOL = 1e-12
ANTISYMMETRY_TOL = 1e-13
RANK_CUTOFF = 1e-10


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants plus cached Killing data.

    Immutable after construction; all operations are pure functions of the
    stored arrays, so instances can be shared freely across threads.
    """

    constants: np.ndarray
    killing: np.ndarray
    jacobi_residual: float
    name: str = field(default="custom", compare=False)

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    @cached_property
    def killing_signature(self) -> tuple[int, int]:
        eig = np.linalg.eigvalsh(self.killing)
        scale = max(1.0, float(np.max(np.abs(eig))))
        n_plus = int(np.sum(eig > 1e-12 * scale))
        n_minus = int(np.sum(eig < -1e-12 * scale))
        return n_plus, n_minus

    @property
    def is_semisimple(self) -> bool:
        """Killing form nondegenerate (Cartan's criterion, numerically)."""
        return sum(self.killing_signature) == self.dim

    @property
    def is_compact(self) -> bool:
        """Killing form negative definite."""
        return self.killing_signature == (0, self.dim)

    @cached_property
    def killing_inverse(self) -> np.ndarray:
        return np.linalg.inv(self.killing)

    def bracket(self, x, y) -> np.ndarray:
        """[x, y]^k = sum_ij constants[k, i, j] x^i y^j."""
        x = self._vec(x)
        y = self._vec(y)
        return backends.bracket(self.constants, x, y)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x, so that ad(x) @ y == bracket(x, y)."""
        x = self._vec(x)
        return np.einsum("kij,i->kj", self.constants, x)

    def gradient(self, covector) -> np.ndarray:
        """Raise an index with the inverse Killing matrix: dG -> grad G."""
        return self.killing_inverse @ self._vec(covector)

    def _vec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"expected vector of shape ({self.dim},), got {x.shape}")
        return x


def lie_algebra(constants, name: str = "custom") -> LieAlgebra:
    """Build and validate an algebra from structure constants (n, n, n).

    Raises AntisymmetryViolation when constants[k, i, j] != -constants[k, j, i]
    beyond roundoff, and JacobiViolation when the Jacobi identity fails the
    scaled tolerance.  Small antisymmetry noise is removed so the stored
    constants are exactly antisymmetric.
    """
    c = np.array(constants, dtype=float)
    if c.ndim != 3 or len(set(c.shape)) != 1 or c.shape[0] == 0:
        raise DimensionMismatch(
            f"structure constants must have shape (n, n, n) with n >= 1, got {c.shape}"
        )
    if not np.all(np.isfinite(c)):
        raise ValueError("structure constants must be finite")

    scale = 1.0 + float(np.max(np.abs(c))) if c.size else 1.0
    asym = c + c.transpose(0, 2, 1)
    worst = float(np.max(np.abs(asym))) if c.size else 0.0
    if worst > ANTISYMMETRY_TOL * scale:
        k, i, j = np.unravel_index(np.argmax(np.abs(asym)), asym.shape)
        raise AntisymmetryViolation(
            f"constants[{k},{i},{j}] + constants[{k},{j},{i}] = {asym[k, i, j]:.3e} != 0"
        )
    c = 0.5 * (c - c.transpose(0, 2, 1))
    c.setflags(write=False)

    # Jacobi: cyclic sum over (i, j, l), free output index m.
    t1 = np.einsum("kij,mkl->ijlm", c, c)
    t2 = np.einsum("kjl,mki->ijlm", c, c)
    t3 = np.einsum("kli,mkj->ijlm", c, c)
    cyc = t1 + t2 + t3
    residual = float(np.max(np.abs(cyc)))
    if residual > JACOBI_TOL * scale**2:
        idx = np.unravel_index(np.argmax(np.abs(cyc)), cyc.shape)
        raise JacobiViolation(
            f"Jacobi identity fails with residual {residual:.3e} at (i,j,l,m)={idx}",
            residual,
            tuple(int(v) for v in idx),
        )

    killing = np.einsum("kaj,jbk->ab", c, c)
    killing = 0.5 * (killing + killing.T)
    killing.setflags(write=False)
    return LieAlgebra(constants=c, killing=killing, jacobi_residual=residual, name=name)


def change_basis(alg: LieAlgebra, p) -> LieAlgebra:
    """Re-express the algebra in the basis e'_j = sum_i p[i, j] e_i.

    The Killing matrix of the result equals p^T k p (congruence), which is
    checked by the test suite rather than assumed.
    """
    p = np.asarray(p, dtype=float)
    n = alg.dim
    if p.shape != (n, n):
        raise DimensionMismatch(f"basis change must be {n}x{n}, got {p.shape}")
    if abs(np.linalg.det(p)) <= 1e-12:
        raise SingularBasisChange(f"|det P| = {abs(np.linalg.det(p)):.3e} <= 1e-12")
    p_inv = np.linalg.inv(p)
    new_c = np.einsum("ck,kij,ia,jb->cab", p_inv, alg.constants, p, p)
    return lie_algebra(new_c, name=alg.name + "'")


def from_matrix_basis(matrices, name: str = "custom") -> LieAlgebra:
    """Solve [B_i, B_j] = sum_k c[k, i, j] B_k for the structure constants.

    The basis must be linearly independent and closed under the commutator
    (least-squares residual below 1e-10 per pair).
    """
    mats = [np.asarray(m, dtype=float) for m in matrices]
    n = len(mats)
    if n == 0:
        raise DimensionMismatch("empty basis")
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise DimensionMismatch("all basis matrices must share one shape")

    v = np.stack([m.ravel() for m in mats], axis=1)  # (p*p, n)
    sig = np.linalg.svd(v, compute_uv=False)
    if sig[-1] <= 1e-10 * sig[0]:
        raise LinearlyDependentBasis(
            f"basis is numerically dependent (sigma_min/sigma_max = {sig[-1] / sig[0]:.3e})"
        )

    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            coef, *_ = np.linalg.lstsq(v, comm.ravel(), rcond=None)
            resid = float(np.linalg.norm(v @ coef - comm.ravel()))
            if resid > 1e-10 * max(1.0, float(np.linalg.norm(comm))):
                raise NotClosedUnderBracket(
                    f"[B_{i + 1}, B_{j + 1}] leaves the span (residual {resid:.3e})"
                )
            c[:, i, j] = coef
            c[:, j, i] = -coef
    return lie_algebra(c, name=name)


def ad_kernel_image(alg: LieAlgebra, x, tol: float = RANK_CUTOFF) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of ker(ad_x) and Im(ad_x) via SVD rank decisions."""
    a = alg.ad(x)
    u, sig, vt = np.linalg.svd(a)
    cutoff = tol * sig[0] if sig.size and sig[0] > 0 else 0.0
    rank = int(np.sum(sig > cutoff))
    image = u[:, :rank]
    kernel = vt[rank:].T
    return kernel, image


# ---------------------------------------------------------------------------
# structure-constant text files: rows "i j k value" with 1-based indices
# ---------------------------------------------------------------------------


def save_structure_constants(path, alg_or_constants) -> None:
    c = alg_or_constants.constants if isinstance(alg_or_constants, LieAlgebra) else None
    if c is None:
        c = np.asarray(alg_or_constants, dtype=float)
    n = c.shape[0]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# structure constants: i j k value  ([e_i, e_j] = sum_k value e_k)\n")
        fh.write(f"dim {n}\n")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if c[k, i, j] != 0.0:
                        fh.write(f"{i + 1} {j + 1} {k + 1} {float(c[k, i, j])!r}\n")


def load_structure_constants(path) -> np.ndarray:
    dim = None
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "dim":
                dim = int(parts[1])
                continue
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 'i j k value', got {line!r}")
            i, j, k = (int(p) for p in parts[:3])
            entries.append((i - 1, j - 1, k - 1, float(parts[3])))
    if dim is None:
        raise ValueError(f"{path}: missing 'dim n' header line")
    c = np.zeros((dim, dim, dim))
    for i, j, k, val in entries:
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise ValueError(f"{path}: index out of range in entry ({i + 1},{j + 1},{k + 1})")
        c[k, i, j] = val
    return c


# ---------------------------------------------------------------------------
# built-in algebras and matrix bases
# ---------------------------------------------------------------------------


def sl2_elementary() -> LieAlgebra:
    """sl(2, R) in the elementary basis: [e1,e2]=e3, [e1,e3]=-2e1, [e2,e3]=2e2."""
    c = np.zeros((3, 3, 3))
    c[2, 0, 1], c[2, 1, 0] = 1.0, -1.0
    c[0, 0, 2], c[0, 2, 0] = -2.0, 2.0
    c[1, 1, 2], c[1, 2, 1] = 2.0, -2.0
    return lie_algebra(c, name="sl2R_e")


def sl2_rotated() -> LieAlgebra:
    """sl(2, R) in the basis where the Killing matrix is diag(1, 1, -1).

    Brackets: [ex,ey] = -s ez, [ex,ez] = -s ey, [ey,ez] = s ex with
    s = 1/sqrt(2).
    """
    s = 1.0 / np.sqrt(2.0)
    c = np.zeros((3, 3, 3))
    c[2, 0, 1], c[2, 1, 0] = -s, s
    c[1, 0, 2], c[1, 2, 0] = -s, s
    c[0, 1, 2], c[0, 2, 1] = s, -s
    return lie_algebra(c, name="sl2R_xyz")


def sl2_rotation_matrix() -> np.ndarray:
    """Columns express (ex, ey, ez) in the elementary basis (e1, e2, e3)."""
    s = 1.0 / (2.0 * np.sqrt(2.0))
    return np.array([[s, 0.0, s], [s, 0.0, -s], [0.0, s, 0.0]])


def so3() -> LieAlgebra:
    """so(3) with [e_i, e_j] = eps_ijk e_k."""
    c = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[k, i, j], c[k, j, i] = 1.0, -1.0
    return lie_algebra(c, name="so3")


def so4() -> LieAlgebra:
    """so(4) presented in the split basis so(3) (+) so(3)."""
    eps = so3().constants
    c = np.zeros((6, 6, 6))
    c[:3, :3, :3] = eps
    c[3:, 3:, 3:] = eps
    return lie_algebra(c, name="so4")


def sl2_matrices() -> list[np.ndarray]:
    """The elementary 2x2 basis of sl(2, R)."""
    return [
        np.array([[0.0, 1.0], [0.0, 0.0]]),
        np.array([[0.0, 0.0], [1.0, 0.0]]),
        np.array([[1.0, 0.0], [0.0, -1.0]]),
    ]


def so_elementary_matrices(n: int) -> list[np.ndarray]:
    """Skew-symmetric elementary basis L_ab (a < b) of so(n)."""
    mats = []
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n))
            m[a, b], m[b, a] = 1.0, -1.0
            mats.append(m)
    return mats


def so4_split_matrices() -> list[np.ndarray]:
    """4x4 matrix basis realizing the split so(3) (+) so(3) presentation."""
    l23, l13, l12, l14, l24, l34 = (
        _skew4(1, 2),
        _skew4(0, 2),
        _skew4(0, 1),
        _skew4(0, 3),
        _skew4(1, 3),
        _skew4(2, 3),
    )
    a = [-l23, l13, -l12]
    b = [-l14, -l24, -l34]
    return [(ai + bi) / 2.0 for ai, bi in zip(a, b)] + [
        (ai - bi) / 2.0 for ai, bi in zip(a, b)
    ]


def _skew4(a: int, b: int) -> np.ndarray:
    m = np.zeros((4, 4))
    m[a, b], m[b, a] = 1.0, -1.0
    return m


BUILTIN_ALGEBRAS = {
    "sl2R_e": sl2_elementary,
    "sl2R_xyz": sl2_rotated,
    "so3": so3,
    "so4": so4,
}
