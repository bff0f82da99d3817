"""
Polyhedron primitives shared by every projection algorithm.

Throughout, a *projection problem* is a pair (system, d): the polyhedron
P = {z in R^(d+e) : L z >= a} together with the subspace of its first d
coordinates.  pi(P) denotes the image of P under z -> z[:d].

The vertex-finding and basis-simplex routines operate on pi(P) without ever
materializing it: every query is answered by an exact LP over the input
system.  Homogeneous systems (cones) are bounded internally by the canonical
cap  sum_{i<d} x_i <= 1  where a polytope is required; ranks and affine hulls
of cone faces are unchanged by the cap, which is how face_rank stays
well-defined on cones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .linalg import orthogonal_complement, orthogonalize, solve_linear
from .lp import (INFEASIBLE, OPTIMAL, UNBOUNDED, ConstraintSystem, Face,
                 as_face, lp_minimize, normalize_face)
from .rationals import dot, is_zero_vector, mpq, vec_sub


class UnboundedProjection(Exception):
    """The projected polyhedron is unbounded in a queried direction.

    For cones this usually means the caller should project the capped cone
    (see truncate at the scenario level) instead of the raw system."""


class DegenerateInput(Exception):
    """Input violates a rank/shape precondition (e.g. empty interior)."""


def pad_objective(direction: Sequence, dim: int) -> List:
    out = list(direction) + [0] * (dim - len(direction))
    return out


def cap_face(dim: int, d: int) -> Face:
    """The canonical bounding cap  -sum_{i<d} x_i >= -1  in R^dim.

    This truncates a cone into a polytope whenever the cone's image in the
    first d coordinates lies in the nonnegative orthant and is pointed
    (entropy-style cones).  Cones with a nonzero image ray of coordinate
    sum <= 0 are outside the cap's domain; downstream LPs then stay
    unbounded and the callers raise rather than return wrong facets."""
    return Face(tuple(-1 if i < d else 0 for i in range(dim)), -1)


def capped(system: ConstraintSystem, d: int) -> ConstraintSystem:
    return system.with_rows([cap_face(system.dim, d)])


def is_implied(system: ConstraintSystem, face) -> bool:
    """
    True iff f.x >= b holds on all of the system's solution set: the exact
    minimum of f over the system is >= b.  Unbounded below means not implied;
    an infeasible system implies everything (vacuously true).
    """
    face = as_face(face)
    sol = lp_minimize(system, pad_objective(face.f, system.dim), want_point=False)
    if sol.status == UNBOUNDED:
        return False
    if sol.status == INFEASIBLE:
        return True
    return sol.objective >= face.b


def remove_redundancies(system: ConstraintSystem) -> ConstraintSystem:
    """
    Greedy minimal subsystem: scan rows in order and drop each row implied by
    the remaining ones (one exact LP per row).  The result describes the same
    polyhedron; no retained row is implied by the other retained rows.
    Deterministic given the row order.
    """
    alive = list(system.rows)
    i = 0
    while i < len(alive):
        rest = alive[:i] + alive[i + 1:]
        candidate = alive[i]
        sub = ConstraintSystem(tuple(rest), system.dim)
        if is_implied(sub, candidate):
            alive = rest
        else:
            i += 1
    return ConstraintSystem(tuple(alive), system.dim, system.names)


def find_vertex(system: ConstraintSystem, d: int, direction: Sequence) -> Tuple:
    """
    A vertex of pi(P) minimizing ``direction`` (stage 1), refined to a unique
    point by exact lexicographic minimization along an orthogonal completion
    of ``direction`` (stages 2..d); each stage pins the previous optimum with
    an equality.  Vector lengths are never normalized, only directions matter.
    Raises UnboundedProjection if some stage is unbounded.
    """
    if is_zero_vector(direction):
        raise ValueError("direction must be nonzero")
    unit = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    completion = orthogonalize(unit, [tuple(direction)])
    stages = [tuple(direction)] + completion
    if len(stages) != d:
        raise DegenerateInput("orthogonal completion has wrong size")

    current = system
    x = None
    for i, q in enumerate(stages):
        sol = lp_minimize(current, pad_objective(q, system.dim))
        if sol.status == UNBOUNDED:
            raise UnboundedProjection(f"stage {i}: unbounded along {q}")
        if sol.status == INFEASIBLE:
            raise DegenerateInput("system is infeasible")
        x = sol.x
        if i + 1 < len(stages):
            current = current.with_equality(pad_objective(q, system.dim), sol.objective)
    return tuple(x[:d])


@dataclass
class BasisSimplex:
    """Affinely independent points spanning pi(P), plus its null directions."""

    points: List[Tuple]
    nulls: List[Tuple]

    @property
    def rank(self) -> int:
        return len(self.points) - 1

    @property
    def base(self) -> Tuple:
        return self.points[0]


def basis_simplex(system: ConstraintSystem, d: int, probe=None) -> BasisSimplex:
    """
    r+1 affinely independent points of pi(P) (r = dim pi(P)) and a basis of
    the directions along which pi(P) is flat.  Homogeneous systems are capped
    first; the affine hull and ranks of cone faces are unaffected.

    Directions are probed in a deterministic order: at each step the first
    basis vector of the exact orthogonal complement of everything recorded so
    far (both spanning and null directions).  The default probe is a single
    LP — the points only need to be affinely independent members of pi(P),
    not vertices, so the lexicographic refinement of find_vertex is skipped.
    Callers that need genuine vertices (the hull driver) pass
    ``probe=lambda c: find_vertex(system, d, c)``.
    """
    work = capped(system, d) if system.homogeneous else system

    if probe is None:
        def probe(direction):
            sol = lp_minimize(work, pad_objective(direction, system.dim))
            if sol.status == UNBOUNDED:
                raise UnboundedProjection(f"projection unbounded along {direction}")
            if sol.status == INFEASIBLE:
                raise DegenerateInput("system is infeasible")
            return tuple(sol.x[:d])

    def measure(direction):
        x = probe(direction)
        return x, dot(direction, x)

    x0, _ = measure(tuple(1 if i == 0 else 0 for i in range(d)))
    points = [x0]
    nulls: List[Tuple] = []
    recorded: List[Tuple] = []
    while len(recorded) < d:
        g = orthogonal_complement(recorded, d)[0]
        accepted = False
        for cand in (g, tuple(-a for a in g)):
            x, value = measure(cand)
            if value != dot(cand, x0):
                points.append(x)
                recorded.append(vec_sub(x, x0))
                accepted = True
                break
        if not accepted:
            nulls.append(g)
            recorded.append(g)
    return BasisSimplex(points=points, nulls=nulls)


def face_rank(system: ConstraintSystem, d: int, face: Face) -> int:
    """
    Rank (affine dimension) of the face of pi(P) induced by a valid
    inequality: the dimension of pi(P) intersected with {f.x = b}, computed
    as |basis_simplex of the system with -f adjoined| - 1.  A facet of a
    full-dimensional r-dim projection has rank r-1.
    """
    aug = system.with_rows([(-as_face(face)).pad(system.dim)])
    return basis_simplex(aug, d).rank


@dataclass
class AffineEmbedding:
    """
    Exact chart for a flat polytope: x = base + V y identifies the affine
    hull (base point plus independent direction vectors) with R^r, so that
    full-dimensional machinery can run in the reduced coordinates y.
    """

    base: Tuple
    directions: List[Tuple]  # r independent vectors in R^d

    @classmethod
    def from_basis(cls, bs: BasisSimplex) -> "AffineEmbedding":
        dirs = [vec_sub(p, bs.base) for p in bs.points[1:]]
        return cls(base=bs.base, directions=dirs)

    @property
    def ambient_dim(self) -> int:
        return len(self.base)

    @property
    def reduced_dim(self) -> int:
        return len(self.directions)

    def embed_point(self, x: Sequence) -> Tuple:
        """Coordinates y with base + V y = x; errors if x is off the hull."""
        rhs = vec_sub(x, self.base)
        rows = [[v[i] for v in self.directions] for i in range(self.ambient_dim)]
        y = solve_linear(rows, rhs)
        if y is None:
            raise DegenerateInput("point is outside the affine hull")
        return tuple(y)

    def lift_point(self, y: Sequence) -> Tuple:
        x = list(self.base)
        for coef, v in zip(y, self.directions):
            if coef:
                x = [a + coef * b for a, b in zip(x, v)]
        return tuple(x)

    def reduce_face(self, face) -> Face:
        """Restrict an ambient inequality to reduced coordinates."""
        face = as_face(face)
        coeffs = [dot(face.f, v) for v in self.directions]
        return normalize_face(coeffs, face.b - dot(face.f, self.base))

    def lift_face(self, face) -> Face:
        """
        Any ambient inequality agreeing with the reduced one on the hull
        (the kernel component is chosen by the exact solver).
        """
        face = as_face(face)
        rows = [list(v) for v in self.directions]
        f = solve_linear(rows, list(face.f))
        if f is None:
            raise DegenerateInput("face does not lift")
        return normalize_face(f, face.b + dot(f, self.base))


def reduce_system(system: ConstraintSystem, d: int, emb: AffineEmbedding) -> ConstraintSystem:
    """
    Rewrite a projection problem whose image is flat into reduced output
    coordinates: substituting x[:d] = base + V y turns each row (f, b) into
    (f[:d] V  ++  f[d:],  b - f[:d] . base) over r + (dim - d) variables.
    Solutions map back through ``emb.lift_point`` on their first r entries.
    """
    if emb.ambient_dim != d:
        raise ValueError("embedding does not chart the first d coordinates")
    rows = []
    for row in system.rows:
        obs, hid = row.f[:d], row.f[d:]
        coeffs = [dot(obs, v) for v in emb.directions] + list(hid)
        rows.append(normalize_face(coeffs, row.b - dot(obs, emb.base)))
    return ConstraintSystem(
        rows=tuple(rows), dim=emb.reduced_dim + (system.dim - d)
    )
