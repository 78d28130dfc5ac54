"""Signed boundary operators, the upper Laplacian on codimension-one forms,
and spectral gaps.

The reference orientation of every multicell is the ascending order of its
vertex ids; the gap is orientation-invariant so any canonical choice works.
Eigenvalues come from an in-package cyclic Jacobi solver on dense symmetric
matrices (desk-scale inputs, reproducible rank decisions).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .complexes import MComplex, MId
from .words import Params


@dataclass
class SignedIncidence:
    rows: list[MId]  # (j-1)-multicells; [EMPTY] for j = 0
    cols: list[MId]  # j-multicells
    matrix: np.ndarray  # entries in {-1, 0, +1}


class SpectralGapUndefined(ValueError):
    """Every codimension-one form is a coboundary; the gap has no domain."""


def boundary_matrix(x: MComplex, j: int) -> SignedIncidence:
    """Signed incidence between j-multicells and their glued facets; the
    sign of a facet is (-1)^(position of the dropped vertex in the
    ascending vertex list)."""
    if not 0 <= j <= x.d:
        raise ValueError(f"dimension {j} out of range 0..{x.d}")
    cols = [c.mid for c in x.multicells(j)]
    if j == 0:
        rows: list[MId] = [((), 0)]
        mat = np.ones((1, len(cols)))
        return SignedIncidence(rows, cols, mat)
    rows = [c.mid for c in x.multicells(j - 1)]
    row_pos = {m: t for t, m in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)))
    for t, mid in enumerate(cols):
        cell = x.cell(mid)
        by_id = sorted(range(j + 1), key=lambda s: cell.vertices[s])
        for position, s in enumerate(by_id):
            dropped_color = cell.colors[s]
            fid = cell.faces[dropped_color]
            mat[row_pos[fid], t] += (-1) ** position
    return SignedIncidence(rows, cols, mat)


def up_laplacian(x: MComplex) -> np.ndarray:
    """B_d B_d^T on the (d-1)-multicells; for a graph this is the standard
    Laplacian D - A."""
    b = boundary_matrix(x, x.d)
    return b.matrix @ b.matrix.T


def jacobi_eigvalsh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 200) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, swept
    until the off-diagonal norm drops below `tol`."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    if not np.allclose(a, a.T, atol=1e-10):
        raise ValueError("matrix is not symmetric")
    for _ in range(max_sweeps):
        off = sqrt(max(0.0, (a * a).sum() - (np.diag(a) ** 2).sum()))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < tol / max(1, n * n):
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (tau + sqrt(1.0 + tau * tau)) if tau >= 0 else -1.0 / (
                    -tau + sqrt(1.0 + tau * tau)
                )
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a = (a + a.T) / 2.0
    return np.sort(np.diag(a))


def orthonormal_columns(mat: np.ndarray, rank_tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the column space by modified Gram-Schmidt with an
    explicit rank cutoff."""
    basis: list[np.ndarray] = []
    for t in range(mat.shape[1]):
        v = mat[:, t].astype(float).copy()
        for b in basis:
            v -= (b @ v) * b
        for b in basis:  # second pass for numerical stability
            v -= (b @ v) * b
        norm = sqrt(v @ v)
        if norm > rank_tol:
            basis.append(v / norm)
    if not basis:
        return np.zeros((mat.shape[0], 0))
    return np.stack(basis, axis=1)


def complement_basis(q: np.ndarray, dim: int, rank_tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(q) in R^dim."""
    basis = [q[:, t] for t in range(q.shape[1])]
    comp: list[np.ndarray] = []
    for t in range(dim):
        v = np.zeros(dim)
        v[t] = 1.0
        for b in basis + comp:
            v -= (b @ v) * b
        for b in basis + comp:
            v -= (b @ v) * b
        norm = sqrt(v @ v)
        if norm > rank_tol:
            comp.append(v / norm)
    if not comp:
        return np.zeros((dim, 0))
    return np.stack(comp, axis=1)


def spectral_gap(x: MComplex, tol: float = 1e-9) -> float:
    """Minimum of the upper Laplacian spectrum restricted to the orthogonal
    complement of the codimension-one coboundaries.

    Raises SpectralGapUndefined when that complement is zero-dimensional."""
    lap = up_laplacian(x)
    cob = boundary_matrix(x, x.d - 1).matrix.T  # coboundary: (d-2)- to (d-1)-forms
    q = orthonormal_columns(cob, rank_tol=tol)
    comp = complement_basis(q, lap.shape[0], rank_tol=tol)
    if comp.shape[1] == 0:
        raise SpectralGapUndefined(
            f"all {x.d - 1}-forms are coboundaries (rank {q.shape[1]} of {lap.shape[0]})"
        )
    reduced = comp.T @ lap @ comp
    eigs = jacobi_eigvalsh(reduced)
    lam = float(eigs[0])
    if lam < -tol:
        raise ValueError(f"upper Laplacian not positive semidefinite: {lam}")
    return lam


def coboundary_rank(x: MComplex, tol: float = 1e-9) -> int:
    cob = boundary_matrix(x, x.d - 1).matrix.T
    return orthonormal_columns(cob, rank_tol=tol).shape[1]


def spectrum(x: MComplex) -> np.ndarray:
    """Full upper-Laplacian spectrum on codimension-one forms."""
    return jacobi_eigvalsh(up_laplacian(x))


def lambda_arboreal(p: Params) -> float:
    """Spectral gap of the infinite k-regular d-dimensional arboreal
    complex: zero for k <= d, else k + d - 1 - 2*sqrt(d(k-1))."""
    if p.k <= p.d:
        return 0.0
    return p.k + p.d - 1 - 2.0 * sqrt(p.d * (p.k - 1))


def lambda_building(q: int) -> float:
    """Spectral gap of the rank-2 affine building with residue count q:
    q + 1 - 2*sqrt(q+1)."""
    if q < 2:
        raise ValueError("q must be >= 2")
    return q + 1 - 2.0 * sqrt(q + 1)


@dataclass
class GapComparison:
    q: int
    building: float
    arboreal: float
    building_exceeds: bool
    meaningful: bool  # the building value is positive in this regime


def building_vs_arboreal(q: int) -> GapComparison:
    """Compare the building gap against the arboreal gap at (d, k) = (2, q+1).
    A strict excess shows a covering can increase the gap."""
    b = lambda_building(q)
    t = lambda_arboreal(Params(2, q + 1))
    return GapComparison(q, b, t, b > t, b > 0)
