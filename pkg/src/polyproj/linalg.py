"""
Dense exact linear algebra over the rationals.

Everything here is plain Gaussian elimination on lists of scalars.  Matrices
are lists of row tuples/lists.  These routines back the geometric primitives
(affine ranks, orthogonal complements, lifting faces through embeddings); the
simplex solver has its own fraction-free kernel and does not use this module
for pivoting.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .rationals import Vector, dot, is_zero_vector, mpq, scale_to_coprime_ints


def rref(rows: Sequence[Sequence]) -> Tuple[List[List], List[int]]:
    """
    Reduced row echelon form.  Returns (reduced nonzero rows, pivot columns).
    """
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = mpq(1) / mpq(mat[r][c]) if mat[r][c] != 1 else 1
        if inv != 1:
            mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def matrix_rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List]:
    """
    One exact solution x of ``rows @ x = rhs`` (free variables set to 0),
    or None if the system is inconsistent.
    """
    if not rows:
        return None
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(aug)
    n = len(rows[0])
    for row in reduced:
        if is_zero_vector(row[:n]) and row[n] != 0:
            return None
    x = [0] * n
    for row, c in zip(reduced, pivots):
        if c == n:  # pivot in the augmented column: inconsistent
            return None
        x[c] = row[n]
    return x


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> List[Vector]:
    """Basis of {x : rows @ x = 0}, entries scaled to coprime integers."""
    if not rows:
        if ncols is None:
            raise ValueError("need ncols for empty matrix")
        return [tuple(1 if j == i else 0 for j in range(ncols)) for i in range(ncols)]
    n = len(rows[0])
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        vec = [mpq(0)] * n
        vec[free] = mpq(1)
        for row, c in zip(reduced, pivots):
            vec[c] = -row[free]
        basis.append(scale_to_coprime_ints(vec))
    return basis


def orthogonalize(vectors: Sequence[Sequence], against: Sequence[Sequence]) -> List[Vector]:
    """
    Gram–Schmidt without normalization: project each vector orthogonal to
    ``against`` and to the previously accepted outputs, dropping zeros.
    Lengths are never normalized (that would leave the rationals), only
    directions matter to the callers.
    """
    basis: List[Vector] = [tuple(v) for v in against]
    out: List[Vector] = []
    for v in vectors:
        w = list(v)
        for b in basis:
            num = dot(w, b)
            if num:
                coef = mpq(num) / mpq(dot(b, b))
                w = [x - coef * y for x, y in zip(w, b)]
        if not is_zero_vector(w):
            w = scale_to_coprime_ints(w)
            basis.append(w)
            out.append(w)
    return out


def orthogonal_complement(vectors: Sequence[Sequence], dim: int) -> List[Vector]:
    """Basis of the orthogonal complement of span(vectors) inside R^dim."""
    vecs = [v for v in vectors if not is_zero_vector(v)]
    if not vecs:
        return [tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)]
    return nullspace(vecs, dim)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of the points, plus one (i.e. max number
    of affinely independent points among them)."""
    if not points:
        return 0
    base = points[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in points[1:]]
    return 1 + matrix_rank(diffs) if diffs else 1
