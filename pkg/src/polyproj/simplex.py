"""
Exact two-phase simplex for standard-form programs

    min c.z   subject to   A z = b,  z >= 0

with Bland's smallest-index pivoting rule (no cycling, fully deterministic
given the row/column order).

The tableau is kept *fraction free*: an integer matrix ``N`` together with a
positive integer denominator ``det`` represents the rational dictionary
``N/det``.  A pivot on entry (r, s) performs the Edmonds/Bareiss update

    N'[i, j] = (N[i, j] * N[r, s] - N[i, s] * N[r, j]) / det     (i != r)
    N'[r, j] = N[r, j],            det' = N[r, s]

where the division is exact (tableau entries are subdeterminants of the input
scaled by the current basis determinant).  Integer arithmetic on numpy object
arrays makes the row updates vectorized while staying exact, which is
considerably faster than elementwise rational arithmetic.

Certificates (optimal multipliers, Farkas vectors for infeasibility) are
recovered lazily from the terminal basis by an exact dense solve, so callers
that only need feasibility/objective information never pay for them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .linalg import solve_linear
from .rationals import common_denominator, mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

#: When true, every pivot re-checks the exact-divisibility invariant.  Slow;
#: enabled by the test suite on small instances.
CHECK_PIVOTS = False


def _scale_row_to_ints(row: Sequence, rhs) -> Tuple[List[int], int, int]:
    """Return (int row, int rhs, positive scale) with row*scale integral."""
    scale = common_denominator(list(row) + [rhs])
    if scale == 1:
        return ([int(x) for x in row], int(rhs), 1)
    introw = [int(x * scale) if not isinstance(x, int) else x * scale for x in row]
    return (introw, int(rhs * scale) if not isinstance(rhs, int) else rhs * scale, scale)


@dataclass
class StandardResult:
    status: str
    z: Optional[Tuple] = None            # primal solution, length n
    objective: Optional[object] = None   # exact rational
    ray: Optional[Tuple] = None          # improving ray when unbounded
    basis: Optional[Tuple[int, ...]] = None
    # Internal state for lazy certificate extraction:
    _rows: Optional[List[List[int]]] = field(default=None, repr=False)
    _rhs: Optional[List[int]] = field(default=None, repr=False)
    _row_scale: Optional[List] = field(default=None, repr=False)
    _kept: Optional[List[int]] = field(default=None, repr=False)
    _ncols: int = 0
    _cost: Optional[List] = field(default=None, repr=False)
    _cost_scale: int = 1

    def _basis_column(self, j: int) -> List:
        rows = self._rows
        if j < self._ncols:
            return [rows[i][j] for i in self._kept]
        art = j - self._ncols
        return [1 if i == art else 0 for i in self._kept]

    def _solve_against_basis(self, target: List) -> List:
        if not self.basis:
            # Every row was dropped as linearly dependent; the zero vector
            # satisfies (A_B)^T pi = target vacuously.
            return [mpq(0)] * len(self._rows)
        cols = [self._basis_column(j) for j in self.basis]
        # Solve (A_B)^T pi = target, i.e. rows of the transposed basis matrix.
        mat = [[cols[k][i] for k in range(len(cols))] for i in range(len(self._kept))]
        matT = [[mat[i][k] for i in range(len(mat))] for k in range(len(cols))]
        sol = solve_linear(matT, target)
        if sol is None:
            raise RuntimeError("terminal basis unexpectedly singular")
        full = [mpq(0)] * len(self._rows)
        for pos, i in enumerate(self._kept):
            full[i] = mpq(sol[pos]) * self._row_scale[i]
        return full

    def multipliers(self) -> Tuple:
        """Exact multipliers pi with pi.A <= c (componentwise on reduced costs)
        and pi.b = objective; defined for optimal results."""
        if self.status != OPTIMAL:
            raise ValueError("multipliers are defined for optimal results only")
        target = [self._cost[j] if j < self._ncols else 0 for j in self.basis]
        pi = self._solve_against_basis(target)
        if self._cost_scale != 1:
            pi = [y / self._cost_scale for y in pi]
        return tuple(pi)

    def farkas(self) -> Tuple:
        """Exact certificate y of infeasibility: y.A <= 0 and y.b > 0."""
        if self.status != INFEASIBLE:
            raise ValueError("farkas certificate exists for infeasible results only")
        target = [0 if j < self._ncols else 1 for j in self.basis]
        return tuple(self._solve_against_basis(target))


class _Tableau:
    def __init__(self, rows: List[List[int]], rhs: List[int], cost: List[int]):
        m, n = len(rows), len(cost)
        self.m, self.n = m, n
        # Layout: column 0 = RHS, columns 1..n = variables.
        # Rows 0..m-1 = constraints, row m = phase-2 cost, row m+1 = phase-1 cost.
        N = np.zeros((m + 2, n + 1), dtype=object)
        for i in range(m):
            N[i, 0] = rhs[i]
            for j in range(n):
                N[i, j + 1] = rows[i][j]
        for j in range(n):
            N[m, j + 1] = cost[j]
        N[m + 1, 0] = -sum(rhs)
        for j in range(n):
            N[m + 1, j + 1] = -sum(rows[i][j] for i in range(m))
        self.N = N
        self.det = 1
        self.basis = [n + i for i in range(m)]  # artificial indices
        self.row_ids = list(range(m))           # original row index per tableau row

    def pivot(self, r: int, s: int) -> None:
        N, det = self.N, self.det
        piv = N[r, s]
        if piv == 0:
            raise RuntimeError("zero pivot")
        rowr = N[r].copy()
        col = N[:, s].copy()
        if CHECK_PIVOTS:
            R = N * piv - np.outer(col, rowr)
            if det != 1 and not all(int(x) % det == 0 for x in R.ravel()):
                raise AssertionError("integer pivoting divisibility violated")
        N *= piv
        N -= np.outer(col, rowr)
        if det != 1:
            N //= det
        N[r] = rowr
        if piv < 0:
            np.negative(N, out=N)
            piv = -piv
        self.det = int(piv)
        self.basis[r] = s - 1  # column 1+j holds variable j

    def _ratio_leave(self, s: int) -> Optional[int]:
        """Bland leaving row for entering column s (tableau column index)."""
        N = self.N
        best = None
        for i in range(self.m):
            a = N[i, s]
            if a > 0:
                if best is None:
                    best = i
                else:
                    lhs = N[i, 0] * N[best, s]
                    rhs = N[best, 0] * N[i, s]
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                        best = i
        return best

    def run(self, cost_row: int, allow_enter) -> str:
        """Bland iterations on the given cost row; returns 'optimal'/'unbounded'."""
        N = self.N
        while True:
            enter = None
            for j in range(1, self.n + 1):
                if N[cost_row, j] < 0 and allow_enter(j - 1):
                    enter = j
                    break
            if enter is None:
                return OPTIMAL
            leave = self._ratio_leave(enter)
            if leave is None:
                self._unbounded_col = enter
                return UNBOUNDED
            self.pivot(leave, enter)

    def drop_rows(self, rows_to_drop: List[int]) -> None:
        keep = [i for i in range(self.m) if i not in rows_to_drop]
        sel = keep + [self.m, self.m + 1]
        self.N = self.N[sel]
        self.basis = [self.basis[i] for i in keep]
        self.row_ids = [self.row_ids[i] for i in keep]
        self.m = len(keep)


def solve_standard(A: Sequence[Sequence], b: Sequence, c: Sequence) -> StandardResult:
    """
    Solve min c.z s.t. A z = b, z >= 0 exactly.  Deterministic: Bland's rule,
    ties by smallest variable index, row order as given.
    """
    m, n = len(A), len(c)
    if m == 0:
        if all(x >= 0 for x in c):
            return StandardResult(OPTIMAL, z=tuple([0] * n), objective=mpq(0), basis=())
        j = next(j for j, x in enumerate(c) if x < 0)
        ray = tuple(1 if k == j else 0 for k in range(n))
        return StandardResult(UNBOUNDED, ray=ray)

    rows, rhs, row_scale = [], [], []
    for i in range(m):
        introw, intrhs, scale = _scale_row_to_ints(A[i], b[i])
        if intrhs < 0:
            introw = [-x for x in introw]
            intrhs = -intrhs
            scale = -scale
        rows.append(introw)
        rhs.append(intrhs)
        row_scale.append(mpq(scale))

    cost_scale = common_denominator(c)
    cost = [int(x * cost_scale) if not isinstance(x, int) else x * cost_scale for x in c]

    tab = _Tableau(rows, rhs, cost)
    p1 = tab.m + 1

    status = tab.run(p1, lambda j: True)
    if tab.N[p1, 0] < 0:  # phase-1 optimum -N[p1,0]/det > 0: infeasible
        return StandardResult(
            INFEASIBLE,
            basis=tuple(tab.basis),
            _rows=rows, _rhs=rhs, _row_scale=row_scale,
            _kept=list(tab.row_ids), _ncols=n, _cost=cost,
        )

    # Drive any zero-level artificials out of the basis; drop dependent rows.
    to_drop = []
    for i in range(tab.m):
        if tab.basis[i] >= n:
            s = next((j for j in range(1, n + 1) if tab.N[i, j] != 0), None)
            if s is None:
                to_drop.append(i)
            else:
                tab.pivot(i, s)
    if to_drop:
        tab.drop_rows(to_drop)

    status = tab.run(tab.m, lambda j: j < n)
    kept = list(tab.row_ids)

    if status == UNBOUNDED:
        s = tab._unbounded_col
        ray = [mpq(0)] * n
        ray[s - 1] = mpq(1)
        det = mpq(tab.det)
        for i in range(tab.m):
            if tab.basis[i] < n:
                ray[tab.basis[i]] = -mpq(tab.N[i, s]) / det
        return StandardResult(UNBOUNDED, ray=tuple(ray))

    det = mpq(tab.det)
    z = [mpq(0)] * n
    for i in range(tab.m):
        if tab.basis[i] < n:
            z[tab.basis[i]] = mpq(tab.N[i, 0]) / det
    objective = -mpq(tab.N[tab.m, 0]) / det / cost_scale
    return StandardResult(
        OPTIMAL,
        z=tuple(z),
        objective=objective,
        basis=tuple(tab.basis),
        _rows=rows, _rhs=rhs, _row_scale=row_scale,
        _kept=kept, _ncols=n, _cost=cost, _cost_scale=cost_scale,
    )
