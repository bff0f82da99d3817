"""
Redundancy removal for inequality systems, with a float prefilter.

A row is redundant when it is implied by the remaining rows; dropping it
leaves the solution set unchanged.  The greedy sweep here decides each row
with a cheap floating-point LP first and only falls back to exact arithmetic
when needed, but *every drop is justified by an exact certificate*:

  - keep decisions need no proof: keeping a redundant row never changes the
    polyhedron, it only costs later work;
  - a drop is made only once an exact conic multiplier vector q >= 0 with
    q^T L = f and q^T a >= b has been reconstructed (from the float dual's
    support, or from a full exact LP as fallback).

So floating point influences speed, never results.
"""

from typing import List, Optional, Sequence

from .lp import OPTIMAL, UNBOUNDED, ConstraintSystem, Face, lp_minimize
from .linalg import solve_linear
from .rationals import dot, mpq

try:  # scipy is an optional accelerator
    import numpy as _np
    from scipy.optimize import linprog as _linprog
    from scipy.sparse import csr_matrix as _csr
except Exception:  # pragma: no cover - exercised only without scipy
    _linprog = None

_SUPPORT_TOL = 1e-9
_DECISION_TOL = 1e-7
_FLOAT_LIMIT = 1e15
#: stand-in for +inf; scipy's linprog rejects genuine infinities in b_ub.
#: A relaxed row can only make the minimum more negative, which still maps
#: to the sound "keep" verdict.
_RELAXED = 1e14


class _FloatFilter:
    """Reusable float LP over the current kept rows.

    Rows are disabled by relaxing their upper bound to +inf instead of
    rebuilding the matrix (scipy formulation: -L x <= -a).
    """

    def __init__(self, rows: Sequence[Face]):
        self.ok = _linprog is not None
        if not self.ok:
            return
        m = len(rows)
        dim = len(rows[0].f) if rows else 0
        data, indices, indptr = [], [], [0]
        self.scale = []
        bub = _np.empty(m)
        for i, row in enumerate(rows):
            mag = max((abs(c) for c in row.f), default=0)
            mag = float(mag) if mag else 1.0
            if not (0 < mag < _FLOAT_LIMIT):
                mag = mag or 1.0
            self.scale.append(mag)
            for j, c in enumerate(row.f):
                if c:
                    data.append(max(-_FLOAT_LIMIT, min(_FLOAT_LIMIT, -float(c) / mag)))
                    indices.append(j)
            indptr.append(len(data))
            bub[i] = max(-_FLOAT_LIMIT, min(_FLOAT_LIMIT, -float(row.b) / mag))
        self.A = _csr((data, indices, indptr), shape=(m, dim))
        self.bub = bub
        self.active = _np.ones(m, dtype=bool)
        self.dim = dim

    def disable(self, i: int) -> None:
        self.active[i] = False

    def probe(self, i: Optional[int], face: Face):
        """Float-minimize face.f over active rows minus row i (i=None keeps
        every active row in place).

        Returns (verdict, support): verdict in {"keep", "try-drop", None},
        support = candidate multiplier rows for the exact certificate.
        """
        if not self.ok:
            return None, None
        mag = max((abs(c) for c in face.f), default=0)
        mag = float(mag) if mag else 1.0
        c = _np.zeros(self.dim)
        for j, v in enumerate(face.f):
            if v:
                c[j] = max(-_FLOAT_LIMIT, min(_FLOAT_LIMIT, float(v) / mag))
        bub = _np.where(self.active, self.bub, _RELAXED)
        if i is not None:
            bub[i] = _RELAXED
        res = _linprog(c, A_ub=self.A, b_ub=bub, bounds=(None, None),
                       method="highs")
        if res.status == 3:  # unbounded below: certainly not implied
            return "keep", None
        if res.status != 0:
            return None, None
        target = float(face.b) / mag
        if res.fun < target - _DECISION_TOL * (1 + abs(target)):
            # Confidently irredundant; keeps need no certificate.
            return "keep", None
        # The minimum looks >= b: likely redundant, ask for an exact proof.
        support = [
            k for k, marg in enumerate(res.ineqlin.marginals)
            if self.active[k] and k != i and marg < -_SUPPORT_TOL
        ]
        return "try-drop", support


def _exact_certificate(rows: List[Face], support: Sequence[int], face: Face) -> bool:
    """True iff nonneg multipliers on `support` reproduce face exactly."""
    if not support:
        return False
    dim = len(face.f)
    mat = [[rows[i].f[k] for i in support] for k in range(dim)]
    q = solve_linear(mat, list(face.f))
    if q is None or any(v < 0 for v in q):
        return False
    return dot(q, [rows[i].b for i in support]) >= face.b


def implied_equalities(system: ConstraintSystem, *,
                       use_float: bool = True) -> List[int]:
    """Indices of rows that hold with equality on the whole solution set.

    Row f.x >= b is an implicit equality iff the reverse -f.x >= -b is also
    implied by the system (max of f equals b).  Each detection is confirmed
    exactly; the float LP only routes rows past the expensive check.  Rows
    of infeasible systems are not reported — callers decide feasibility.
    """
    rows = list(system.rows)
    filt = _FloatFilter(rows) if use_float else None
    use_filter = bool(filt and filt.ok)
    out: List[int] = []
    for i, face in enumerate(rows):
        rev = Face(tuple(-c for c in face.f), -face.b)
        if use_filter:
            verdict, support = filt.probe(None, rev)
            if verdict == "keep":
                continue  # reverse clearly violated somewhere: no equality
            if verdict == "try-drop" and _exact_certificate(rows, support, rev):
                out.append(i)
                continue
        sol = lp_minimize(system, list(rev.f), want_point=False)
        if sol.status == OPTIMAL and sol.objective >= rev.b:
            out.append(i)
    return out


def prune_redundant(system: ConstraintSystem, *, protect: Sequence[int] = (),
                    use_float: bool = True) -> ConstraintSystem:
    """Greedy irredundant subsystem with the same solution set.

    Rows listed in `protect` are never considered for removal.  The result
    depends only on the input order (deterministic).
    """
    rows = list(system.rows)
    alive = [True] * len(rows)
    protected = set(protect)
    filt = _FloatFilter(rows) if use_float else None
    use_filter = bool(filt and filt.ok)

    for i, face in enumerate(rows):
        if i in protected:
            continue
        others = [rows[k] for k in range(len(rows)) if alive[k] and k != i]
        if not others:
            continue
        decided = False
        if use_filter:
            verdict, support = filt.probe(i, face)
            if verdict == "keep":
                decided = True
            elif verdict == "try-drop" and _exact_certificate(
                rows, [s for s in support if alive[s] and s != i], face
            ):
                alive[i] = False
                filt.disable(i)
                decided = True
        if decided:
            continue
        sub = ConstraintSystem(tuple(others), system.dim)
        sol = lp_minimize(sub, list(face.f), want_point=False)
        if sol.status == OPTIMAL and sol.objective >= face.b:
            alive[i] = False
            if use_filter:
                filt.disable(i)
        elif sol.status == UNBOUNDED:
            pass  # not implied, keep
        elif sol.status == OPTIMAL:
            pass  # minimum below rhs, keep
        else:
            # remaining rows infeasible: everything is vacuously implied
            alive[i] = False
            if use_filter:
                filt.disable(i)

    kept = tuple(r for r, a in zip(rows, alive) if a)
    return ConstraintSystem(kept, system.dim, system.names)
