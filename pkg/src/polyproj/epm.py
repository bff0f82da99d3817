"""Face sampling through the polytope of row combinations.

Projecting a system L x >= a onto its first d coordinates can be phrased
entirely in terms of the rows: every valid inequality of the shadow is a
non-negative combination q of input rows whose coefficients cancel on the
eliminated coordinates.  Normalizing by sum(q) = 1 makes the feasible q a
polytope, and optimizing a linear objective over it yields faces of the
shadow directly -- one exact LP per sample, no vertex structure needed.

The sampled face for an optimal vertex q is ((q^T L)[:d], q^T a).  Choosing
the objective p_i = f_i . x0 - b_i for a candidate point x0 makes

    p . q = (q^T L) . x0 - q^T a,

i.e. the LP minimizes the slack of the sampled face at x0, so whenever x0
lies outside the shadow the returned face separates it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lp import (
    ConstraintSystem,
    Face,
    InfeasibleSystem,
    lp_minimize,
    normalize_face,
)
from .rationals import dot


@dataclass(frozen=True)
class CombinationPolytope:
    """Normalized non-negative row combinations landing in the output space.

    ``base`` constrains the combination vector q: q >= 0, sum(q) = 1, and
    (q^T L) = 0 on every coordinate past ``d``.  ``link`` is the system the
    combinations are drawn from, so any feasible q maps to the inequality
    (q^T L)[:d] . x >= q^T a, valid on the projection by construction.
    """

    base: ConstraintSystem
    link: ConstraintSystem
    d: int


def build_combination_polytope(system: ConstraintSystem, d: int) -> CombinationPolytope:
    """Set up the combination polytope for projecting onto the first d coords."""
    if not 0 <= d <= system.dim:
        raise ValueError("output dimension out of range")
    m = len(system.rows)
    rows = []
    for i in range(m):
        unit = [0] * m
        unit[i] = 1
        rows.append(Face(tuple(unit), 0))
    base = ConstraintSystem.from_rows(rows, m)
    base = base.with_equality([1] * m, 1)
    columns = system.transpose()
    for j in range(d, system.dim):
        base = base.with_equality(columns[j], 0)
    return CombinationPolytope(base=base, link=system, d=d)


def epm_sample_face(cp: CombinationPolytope, p: Sequence) -> Face:
    """The face of the projection selected by minimizing p.q over the polytope.

    The optimum is attained at a vertex q, which maps to the (normalized)
    inequality ((q^T L)[:d], q^T a).  The result can be a face of any rank,
    including the trivial 0 . x >= b one.  Raises InfeasibleSystem when no
    combination cancels the eliminated coordinates (the shadow is the whole
    output space and has no nontrivial valid inequalities).
    """
    p = list(p)
    if len(p) != len(cp.link.rows):
        raise ValueError("objective width does not match the row count")
    sol = lp_minimize(cp.base, p)
    if not sol.optimal:
        raise InfeasibleSystem("no normalized row combination lands in the output space")
    q = sol.x
    columns = cp.link.transpose()
    coeffs = [dot(q, columns[j]) for j in range(cp.d)]
    rhs = dot(q, [row.b for row in cp.link.rows])
    return normalize_face(coeffs, rhs)


def separation_objective(system: ConstraintSystem, point: Sequence) -> list:
    """Per-row slacks f_i . x0 - b_i of a candidate point, as an LP objective.

    Feeding this to epm_sample_face minimizes the sampled face's slack at x0:
    the returned face is violated by x0 whenever x0 lies strictly outside the
    projection.  On homogeneous systems (all b = 0) this is exactly L . x0.
    """
    x0 = list(point)
    if len(x0) != system.dim:
        raise ValueError("point width does not match the system")
    return [dot(row.f, x0) - row.b for row in system.rows]
