"""
Inequality systems and exact linear programming over them.

Canonical geometry: a system is a finite list of rows (f, b) each meaning
``f . x >= b``; the solution set is the polyhedron P = {x : L x >= a}.
Equalities are represented as paired rows (f, b), (-f, -b).  Rows are
normalized on ingest to coprime integer coefficients (positive scaling only,
so the inequality is unchanged), which makes rows hashable and deduplicable.

``lp_minimize`` solves min c.x over P exactly.  Internally it solves the dual

    max a.q   s.t.   L^T q = c,  q >= 0

with the fraction-free simplex from :mod:`polyproj.simplex`.  For the systems
this package cares about (many rows, comparatively few coordinates) the dual
tableau is far smaller than a primal encoding with split free variables.  The
primal point is recovered from the terminal dual basis (x = -pi, feasible by
the termination condition), the dual vector is the simplex solution itself,
and unboundedness/infeasibility are separated by an auxiliary Farkas system,
so no primal-form tableau is ever built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from . import simplex
from .rationals import dot, mpq, scale_to_coprime_ints

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class InfeasibleSystem(ValueError):
    """Raised by operations that require a nonempty solution set."""


class Face(NamedTuple):
    """One inequality f.x >= b with integer coefficients."""

    f: Tuple[int, ...]
    b: int

    def pad(self, dim: int) -> "Face":
        """Zero-extend the coefficient vector to a wider space."""
        if len(self.f) == dim:
            return self
        if len(self.f) > dim:
            raise ValueError("cannot pad to a smaller dimension")
        return Face(self.f + (0,) * (dim - len(self.f)), self.b)

    def __neg__(self) -> "Face":
        return Face(tuple(-x for x in self.f), -self.b)


def normalize_face(coeffs: Sequence, rhs=0) -> Face:
    """
    Scale (f, b) by the positive rational making all entries coprime integers.
    Orientation is preserved; (0, b) rows keep the sign of b.
    """
    scaled = scale_to_coprime_ints(tuple(coeffs) + (rhs,))
    return Face(scaled[:-1], scaled[-1])


def as_face(obj) -> Face:
    """Coerce a Face or a (coeffs, rhs) pair into a normalized Face."""
    if isinstance(obj, Face):
        return normalize_face(obj.f, obj.b)
    coeffs, rhs = obj
    return normalize_face(coeffs, rhs)


@dataclass(frozen=True)
class ConstraintSystem:
    """An inequality description L x >= a of a polyhedron in R^dim."""

    rows: Tuple[Face, ...]
    dim: int
    names: Optional[Tuple[str, ...]] = None

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], rhs=None,
                  dim: Optional[int] = None, names=None) -> "ConstraintSystem":
        """Build a system from Face objects, (coeffs, rhs) pairs, or
        coefficient rows with a separate rhs vector.  An int second argument
        is taken as the dimension for convenience."""
        if isinstance(rhs, int) and dim is None:
            rhs, dim = None, rhs
        rows = list(rows)
        if rhs is not None:
            faces = [normalize_face(r, b) for r, b in zip(rows, list(rhs))]
        else:
            faces = [as_face(r) for r in rows]
        if dim is None:
            if not faces:
                raise ValueError("dimension required for an empty system")
            dim = len(faces[0].f)
        for face in faces:
            if len(face.f) != dim:
                raise ValueError("inconsistent row widths")
        return cls(tuple(faces), dim, tuple(names) if names else None)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def homogeneous(self) -> bool:
        return all(r.b == 0 for r in self.rows)

    def with_rows(self, extra: Iterable) -> "ConstraintSystem":
        extra = [as_face(r).pad(self.dim) for r in extra]
        return ConstraintSystem(self.rows + tuple(extra), self.dim, self.names)

    def with_equality(self, coeffs: Sequence, rhs=0) -> "ConstraintSystem":
        face = normalize_face(coeffs, rhs)
        return self.with_rows([face, -face])

    def transpose(self) -> List[List[int]]:
        """Columns of L as rows (cached); the constraint matrix of the dual."""
        cached = getattr(self, "_transpose_cache", None)
        if cached is None:
            cached = [[row.f[k] for row in self.rows] for k in range(self.dim)]
            object.__setattr__(self, "_transpose_cache", cached)
        return cached


@dataclass
class LpSolution:
    status: str
    x: Optional[Tuple] = None
    objective: Optional[object] = None
    duals: Optional[Tuple] = None   # q >= 0 with q.L = c and q.a = objective
    ray: Optional[Tuple] = None     # recession direction with c.ray < 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _verify_point(system: ConstraintSystem, x, objective, c) -> None:
    if dot(c, x) != objective:
        raise AssertionError("recovered point does not attain the LP objective")
    for row in system.rows:
        if dot(row.f, x) < row.b:
            raise AssertionError("recovered LP point violates the system")


def lp_minimize(system: ConstraintSystem, objective: Sequence, *,
                want_point: bool = True) -> LpSolution:
    """
    Exact min of objective.x over the system.  Status is one of optimal /
    unbounded / infeasible; optimal solutions carry the attaining point, the
    exact objective and dual multipliers, unbounded ones a ray witness.

    ``want_point=False`` skips recovery of the attaining point (status,
    objective and duals only), which callers on hot paths use.
    """
    c = list(objective)
    if len(c) != system.dim:
        raise ValueError("objective width does not match the system")
    m = len(system.rows)
    if m == 0:
        if all(x == 0 for x in c):
            return LpSolution(OPTIMAL, x=tuple([0] * system.dim), objective=mpq(0),
                              duals=())
        ray = tuple(-x for x in c)
        return LpSolution(UNBOUNDED, ray=ray)

    res = simplex.solve_standard(system.transpose(), c,
                                 [-row.b for row in system.rows])
    if res.status == simplex.OPTIMAL:
        value = -res.objective
        sol = LpSolution(OPTIMAL, objective=value, duals=res.z)
        if want_point:
            x = tuple(-p for p in res.multipliers())
            _verify_point(system, x, value, c)
            sol.x = x
        return sol

    if res.status == simplex.UNBOUNDED:
        # The dual is unbounded, so the primal is infeasible.
        return LpSolution(INFEASIBLE)

    # Dual infeasible: primal is unbounded if feasible, else infeasible.
    # Farkas: L x >= a has no solution iff some q >= 0 has q.L = 0, q.a = 1.
    aug = system.transpose() + [[row.b for row in system.rows]]
    feas = simplex.solve_standard(aug, [0] * system.dim + [1], [0] * m)
    if feas.status == simplex.OPTIMAL:
        return LpSolution(INFEASIBLE)
    ray = tuple(-y for y in res.farkas())
    if dot(c, ray) >= 0:
        raise AssertionError("invalid unboundedness certificate")
    for row in system.rows:
        if dot(row.f, ray) < 0:
            raise AssertionError("certificate is not a recession direction")
    return LpSolution(UNBOUNDED, ray=ray)


def lp_feasible(system: ConstraintSystem) -> bool:
    """True when the system has at least one solution."""
    sol = lp_minimize(system, [0] * system.dim, want_point=False)
    return sol.status == OPTIMAL


def feasible_point(system: ConstraintSystem) -> Optional[Tuple]:
    """A point of the system, or None when it is empty."""
    sol = lp_minimize(system, [0] * system.dim)
    return sol.x if sol.status == OPTIMAL else None
