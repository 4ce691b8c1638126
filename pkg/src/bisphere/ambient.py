"""Ambient linear algebra on R^(2n+2).

The sphere S^(2n+1) sits in R^(2n+2), identified with C^(n+1) by stacking the
real parts before the imaginary parts.  Three orthogonal complex structures
act on R^8 (quaternionic triple); only the first exists in other dimensions.
All structure actions are stored as signed permutations, so the algebraic
identities (square = -Id, skewness, anticommutation) hold exactly in floating
point.  A dense-matrix fallback is kept for property tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TAGS = ("I", "J", "K")


@dataclass(frozen=True)
class ComplexStructure:
    """Signed-permutation action v -> sign * v[perm] on R^(2n+2)."""

    tag: str
    n: int
    perm: np.ndarray = field(repr=False)
    sign: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.n + 2

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Apply to a vector or an array of vectors (last axis = coordinates)."""
        v = np.asarray(v, dtype=float)
        if v.shape[-1] != self.dim:
            raise ValueError(
                f"dimension mismatch: expected {self.dim}, got {v.shape[-1]}")
        return self.sign * v[..., self.perm]

    def matrix(self) -> np.ndarray:
        """Dense matrix M with M @ v == apply(v) (fallback for property tests)."""
        return self.apply(np.eye(self.dim)).T

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.apply(v)


def _compose(a: ComplexStructure, b: ComplexStructure, tag: str,
             negate: bool = False) -> ComplexStructure:
    # (a o b) v = a.sign * (b v)[a.perm] = (a.sign * b.sign[a.perm]) * v[b.perm[a.perm]]
    perm = b.perm[a.perm]
    sign = a.sign * b.sign[a.perm]
    if negate:
        sign = -sign
    return ComplexStructure(tag=tag, n=a.n, perm=perm, sign=sign)


def structure(tag: str, n: int) -> ComplexStructure:
    """Return the complex structure I, J or K on R^(2n+2).

    I maps (x, y) -> (-y, x) in the (n+1, n+1) block split.  J and K act on
    R^8 only (n = 3); K = -I o J.
    """
    if tag not in TAGS:
        raise ValueError(f"unknown structure tag {tag!r}")
    m = n + 1
    if tag == "I":
        perm = np.concatenate([np.arange(m, 2 * m), np.arange(0, m)])
        sign = np.concatenate([-np.ones(m), np.ones(m)])
        return ComplexStructure("I", n, perm, sign)
    if n != 3:
        raise ValueError(f"structure {tag} exists only on S^7 (n = 3), got n = {n}")
    # J in 2x2 sub-blocks of R^8: (Jv)_1 = v_4, (Jv)_2 = -v_3, (Jv)_3 = v_2, (Jv)_4 = -v_1
    perm = np.array([6, 7, 4, 5, 2, 3, 0, 1])
    sign = np.array([1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0])
    J = ComplexStructure("J", n, perm, sign)
    if tag == "J":
        return J
    return _compose(structure("I", n), J, "K", negate=True)


def check_on_sphere(z: np.ndarray, tol: float = 1e-12) -> None:
    """Raise if any point fails the unit-sphere constraint |<z,z> - 1| < tol."""
    z = np.asarray(z, dtype=float)
    err = np.abs((z * z).sum(axis=-1) - 1.0).max()
    if err >= tol:
        raise ValueError(f"point off the unit sphere by {err:.3e} (tol {tol:.1e})")


def project_tangent(z: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Orthogonal projection of v onto the tangent space of the sphere at z.

    Idempotent and self-adjoint for the Euclidean product; accepts batched
    inputs with matching leading shapes.
    """
    z = np.asarray(z, dtype=float)
    v = np.asarray(v, dtype=float)
    return v - (v * z).sum(axis=-1, keepdims=True) * z


def tangency_error(z: np.ndarray, v: np.ndarray) -> float:
    return float(np.abs((np.asarray(v) * np.asarray(z)).sum(axis=-1)).max())


def gram_schmidt(vectors, tol: float = 1e-8):
    """Modified Gram-Schmidt with re-orthogonalization and a drop tolerance.

    Returns (orthonormal_list, rank).  Input vectors whose residual after
    orthogonalization has norm < tol are dropped.
    """
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if not vecs:
        raise ValueError("gram_schmidt: empty input")
    basis: list[np.ndarray] = []
    for v in vecs:
        w = v.copy()
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for b in basis:
                w = w - (w @ b) * b
        norm = np.linalg.norm(w)
        if norm >= tol:
            basis.append(w / norm)
    return basis, len(basis)


def gram_rank(vectors, tol: float = 1e-8) -> int:
    return gram_schmidt(vectors, tol)[1]


def canonical_basis(n: int) -> np.ndarray:
    """Identity matrix whose rows are the canonical basis vectors of R^(2n+2)."""
    return np.eye(2 * n + 2)
