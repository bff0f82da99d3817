"""Facet enumeration by walking facet adjacencies.

Every ridge ((r-2)-face) of an r-dimensional polytope lies in exactly two
facets, and the facet graph is connected.  So the complete facet list can be
grown from a single seed facet: compute the ridges of a known facet by
projecting the facet's own polytope (one rank lower), rotate the facet around
each ridge to reach the neighboring facet, repeat until no facet is left
unexplored.  The ridge projector is chosen recursively — depth 0 uses the
hull-based projector (chm), depth k uses this walk again — which trades hull
size against LP count.

The same rotation primitive supports turning arbitrary valid inequalities
into facets (``to_facet``), refining an inequality into an implying facet set
(``to_facets``), certifying non-interior points (``point_to_facets``), and a
budgeted randomized search (``rfd``) that returns a sound partial facet list
and can be resumed.

Cones are bounded by the canonical cap on the output coordinates; the walk
traverses the truncated polytope (including the cap facet, whose ridges lead
to genuine neighbors) and the cap artifacts are dropped from returned lists.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .chm import chm_project
from .epm import build_combination_polytope, epm_sample_face, separation_objective
from .geometry import (
    AffineEmbedding,
    BasisSimplex,
    DegenerateInput,
    UnboundedProjection,
    basis_simplex,
    cap_face,
    capped,
    face_rank,
    is_implied,
    pad_objective,
    reduce_system,
)
from .linalg import nullspace
from .lp import (
    INFEASIBLE,
    UNBOUNDED,
    ConstraintSystem,
    Face,
    InfeasibleSystem,
    as_face,
    feasible_point,
    lp_minimize,
    normalize_face,
)
from .rationals import dot, is_zero_vector, rational, vec_add, vec_scale, vec_sub

_SAMPLE_RETRIES = 32


@dataclass(frozen=True)
class AfiConfig:
    """Knobs for the adjacency walk.

    ``depth`` is the number of walk levels above the hull-based projector
    (depth 0 is plain chm).  ``group`` marks whole orbits done from a single
    representative.  ``rfd_budget`` caps the total number of hull-projector
    leaf calls in randomized mode.  ``seed`` drives every random choice, so
    equal seeds give identical runs.
    """

    depth: int = 1
    group: Optional[object] = None
    rfd_budget: Optional[int] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("depth must be non-negative")


@dataclass
class FacetQueue:
    """Resumable traversal state of the facet walk.

    ``pending`` holds discovered-but-unexplored facets, ``done`` the explored
    ones (plus their orbit images), ``cache`` each explored facet's ridge
    list.  All faces are normalized and live on the working polytope, i.e.
    for cones they include the cap facet.
    """

    pending: Set[Face] = field(default_factory=set)
    done: Set[Face] = field(default_factory=set)
    cache: Dict[Face, Tuple[Face, ...]] = field(default_factory=dict)


class _Budget:
    """Counts down hull-projector leaf calls; None means unlimited."""

    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.left = limit
        self.denied = False  # a leaf call was refused: results since are partial

    @property
    def limited(self) -> bool:
        return self.limit is not None

    @property
    def exhausted(self) -> bool:
        return self.limited and self.left <= 0

    def take(self) -> bool:
        if not self.limited:
            return True
        if self.left <= 0:
            self.denied = True
            return False
        self.left -= 1
        return True


def rotate(system: ConstraintSystem, g, s) -> Tuple[Face, Face]:
    """Sweep the candidate inequality g around the pivot axis s until valid.

    g and s are width-d inequalities with exactly orthogonal coefficient
    vectors.  Each step finds a point x violating the current candidate and
    replaces the pair by the unique (up to positive scale) pair in span{g, s}
    that is tight at x and at the running pivot, keeping the sweep monotone:

        g' = sigma*g - gamma*s              b' = sigma*b - gamma*c
        s' = gamma*|s|^2*g + sigma*|g|^2*s  c' = gamma*|s|^2*b + sigma*|g|^2*c

    with gamma = g.x - b < 0 and sigma = s.x - c.  These are the unit-norm
    update rules cleared of denominators — the pair is only meaningful up to
    positive scaling, so exact integer faces can be kept throughout.  On
    return g is valid and tight (min g.x = b, asserted) and s is the rotated
    companion axis, still exactly orthogonal.
    """
    g = as_face(g)
    s = as_face(s)
    if len(g.f) != len(s.f):
        raise ValueError("face and axis must have equal width")
    if is_zero_vector(g.f) or is_zero_vector(s.f):
        raise ValueError("rotation requires nonzero face and axis vectors")
    if dot(g.f, s.f) != 0:
        raise ValueError("rotation axis must be orthogonal to the face")
    d = len(g.f)
    if d > system.dim:
        raise ValueError("face is wider than the system")
    work = capped(system, d) if system.homogeneous else system
    norm_g = dot(g.f, g.f)
    norm_s = dot(s.f, s.f)
    moved = False
    while True:
        sol = lp_minimize(work, pad_objective(g.f, work.dim))
        if sol.status == INFEASIBLE:
            raise InfeasibleSystem("cannot rotate over an empty polyhedron")
        if sol.status == UNBOUNDED:
            raise UnboundedProjection("rotation needs a bounded image; cap the cone")
        x = sol.x[:d]
        gamma = sol.objective - g.b
        if gamma >= 0:
            if moved and gamma != 0:
                raise AssertionError("rotation terminated on a non-tight face")
            return g, s
        sigma = dot(s.f, x) - s.b
        g2 = normalize_face(
            [sigma * a - gamma * c for a, c in zip(g.f, s.f)],
            sigma * g.b - gamma * s.b,
        )
        s2 = normalize_face(
            [gamma * norm_s * a + sigma * norm_g * c for a, c in zip(g.f, s.f)],
            gamma * norm_s * g.b + sigma * norm_g * s.b,
        )
        if dot(g2.f, s2.f) != 0:
            raise AssertionError("rotation update broke orthogonality")
        g, s = g2, s2
        norm_g = dot(g.f, g.f)
        norm_s = dot(s.f, s.f)
        moved = True


def _subface_axis(face: Face, pdirs: List[Tuple], fbase: Tuple,
                  fdirs: List[Tuple]) -> Optional[Face]:
    """A nonzero direction in span(pdirs) orthogonal to fdirs and to face.f,
    paired with its offset at the face's base point; None if no such
    direction exists (the face spans the whole image)."""
    targets = fdirs + [tuple(face.f)]
    rows = [[dot(t, p) for p in pdirs] for t in targets]
    kernel = nullspace(rows, ncols=len(pdirs))
    for lam in kernel:
        vec = [0] * len(fbase)
        for coef, p in zip(lam, pdirs):
            if coef:
                vec = [a + coef * b for a, b in zip(vec, p)]
        if not is_zero_vector(vec):
            return Face(tuple(vec), dot(vec, fbase))
    return None


def _tighten(work: ConstraintSystem, d: int, face: Face,
             P: BasisSimplex, pdirs: List[Tuple],
             control: Optional[Tuple] = None) -> Face:
    """Drive a valid width-d inequality up the face lattice until it is a
    facet of the image of ``work`` (rank |P|-2... i.e. P.rank - 1).

    Each round: take the tight-set simplex F of the current face, pick a
    pivot axis in the image's span orthogonal to F and the face, orient it
    toward the polytope's slack side, and rotate the *negated* face around
    it.  The landing face is valid, tight, and strictly larger in rank
    (asserted).  With a ``control`` point (which must strictly violate the
    incoming face), the rotation endpoint is chosen so the result still
    strictly separates the control point: if the first endpoint fails, the
    opposite sweep lands on the other endpoint of the valid pencil arc, and
    linearity guarantees one of the two cuts strictly.
    """
    if control is not None and not dot(face.f, control) < face.b:
        raise ValueError("control point must strictly violate the face")
    prev_rank = None
    while True:
        F = basis_simplex(work.with_rows([(-face).pad(work.dim)]), d)
        if prev_rank is not None and F.rank <= prev_rank:
            raise AssertionError("face rank did not increase during tightening")
        prev_rank = F.rank
        if F.rank == P.rank - 1:
            return face
        fdirs = [vec_sub(q, F.base) for q in F.points[1:]]
        axis = _subface_axis(face, pdirs, F.base, fdirs)
        if axis is None:
            raise DegenerateInput("face spans the whole image; nothing to tighten")
        sol = lp_minimize(work, pad_objective(axis.f, work.dim), want_point=False)
        if sol.status == UNBOUNDED:
            raise UnboundedProjection("image unbounded along a pivot axis")
        if sol.objective >= axis.b:
            axis = -axis
        cand, companion = rotate(work, -face, -axis)
        if control is not None and dot(cand.f, control) >= cand.b:
            cand, _ = rotate(work, -cand, companion)
            if dot(cand.f, control) >= cand.b:
                raise AssertionError(
                    "neither pencil endpoint separates the control point"
                )
        face = cand


def to_facet(system: ConstraintSystem, d: int, face) -> Face:
    """Tighten a valid inequality into a facet of the projection whose tight
    set contains the input's tight set.  Facet inputs come back unchanged;
    invalid or trivial inputs are rejected.  A valid face that is slack
    everywhere has its offset raised to the supporting value first, so the
    tightening loop always starts from a nonempty tight set."""
    face = as_face(face)
    if len(face.f) > d:
        raise ValueError("face is wider than the output space")
    face = face.pad(d)
    if is_zero_vector(face.f):
        raise ValueError("the trivial face cannot be tightened")
    work = capped(system, d) if system.homogeneous else system
    if not is_implied(work, face.pad(work.dim)):
        raise ValueError("input face is not valid on the projection")
    support = lp_minimize(work, pad_objective(face.f, work.dim),
                          want_point=False)
    if support.optimal and support.objective > face.b:
        face = normalize_face(face.f, support.objective)
    P = basis_simplex(work, d)
    pdirs = [vec_sub(p, P.base) for p in P.points[1:]]
    return _tighten(work, d, face, P, pdirs)


def get_facet(system: ConstraintSystem, d: int, seed: int = 0) -> Face:
    """An arbitrary facet of the projection: sample a valid inequality from
    the row-combination polytope with a random objective, then tighten it.
    Trivial samples are redrawn a bounded number of times.  Flat images are
    charted onto their affine hull first and the facet is returned in the
    chart's coordinates."""
    if not 1 <= d <= system.dim:
        raise ValueError(f"projection dimension {d} out of range")
    rng = random.Random(seed)
    bs = basis_simplex(system, d)
    if bs.rank == 0:
        raise DegenerateInput("the image is a single point; it has no facets")
    if bs.rank < d:
        emb = _chart(system, bs)
        reduced = reduce_system(system, d, emb)
        return get_facet(reduced, bs.rank, seed=rng.randrange(2**32))
    cp = build_combination_polytope(system, d)
    for _ in range(_SAMPLE_RETRIES):
        p = [rng.randint(-(2**20), 2**20) for _ in system.rows]
        sample = epm_sample_face(cp, p)
        if not is_zero_vector(sample.f):
            return to_facet(system, d, sample)
    raise DegenerateInput("row combinations produced only trivial faces")


def to_facets(system: ConstraintSystem, d: int, face, known: Iterable = ()) -> List[Face]:
    """A set of facets that together imply the given valid inequality.

    Repeatedly minimize the face over the region cut out by the facets found
    so far; every minimizer that still violates the face is a certified
    exterior control point, which the control-point tightener converts into
    a facet strictly cutting it.  Terminates because each new facet removes
    its control point from the region.  ``known`` facets seed the region and
    are included in the returned set."""
    face = as_face(face)
    if len(face.f) > d:
        raise ValueError("face is wider than the output space")
    face = face.pad(d)
    work = capped(system, d) if system.homogeneous else system
    if not is_implied(work, face.pad(work.dim)):
        raise ValueError("input face is not valid on the projection")
    out: Set[Face] = {as_face(k).pad(d) for k in known}
    P = basis_simplex(work, d)
    pdirs = [vec_sub(p, P.base) for p in P.points[1:]]
    # the region is intersected with the cap for cones so control points
    # stay on the polytope side of the cap and can never select it
    region_extra = [cap_face(d, d)] if system.homogeneous else []
    while True:
        region = ConstraintSystem.from_rows(sorted(out) + region_extra, d)
        sol = lp_minimize(region, list(face.f))
        if sol.status == INFEASIBLE:
            return sorted(out)
        if sol.status == UNBOUNDED:
            base = feasible_point(region)
            step = dot(face.f, sol.ray)
            if step >= 0:
                raise AssertionError("unbounded certificate does not lower the face")
            t = (face.b - dot(face.f, base)) / rational(step)
            t = t + 1 if t + 1 > 1 else 1
            x = tuple(vec_add(base, vec_scale(sol.ray, t)))
        elif sol.objective >= face.b:
            return sorted(out)
        else:
            x = sol.x
        facet = _tighten(work, d, face, P, pdirs, control=x)
        if not dot(facet.f, x) < facet.b:
            raise AssertionError("new facet does not cut its control point")
        out.add(facet)


def point_to_facets(system: ConstraintSystem, d: int, y: Sequence) -> List[Face]:
    """Facets certifying that y is not interior to the projection: every
    returned facet g satisfies g.y <= c.

    A separating or touching valid inequality is sampled from the
    row-combination polytope (minimizing its value at y, then its slack at
    y), refined into implying facets, and the result filtered to the members
    that themselves certify y — a nonempty set, since a non-negative
    combination of the facets weakly dominates the sampled inequality.
    Raises ValueError when y is strictly interior (no certificate exists).
    """
    y = tuple(rational(v) for v in y)
    if len(y) != d:
        raise ValueError("point width does not match the output dimension")
    cp = build_combination_polytope(system, d)
    padded = y + (0,) * (system.dim - d)

    candidate = None
    sample = epm_sample_face(cp, [dot(row.f, padded) for row in system.rows])
    if not is_zero_vector(sample.f) and dot(sample.f, y) <= sample.b:
        candidate = sample
    if candidate is None:
        # rows with offsets need the slack objective; it also decides
        # interiority exactly
        slack = separation_objective(system, padded)
        sol = lp_minimize(cp.base, slack)
        if not sol.optimal:
            raise InfeasibleSystem("no normalized row combination lands in the output space")
        if sol.objective > 0:
            raise ValueError("the point is strictly interior to the projection")
        sample = _combination_face(cp, sol.x)
        if not is_zero_vector(sample.f) and dot(sample.f, y) <= sample.b:
            candidate = sample
        else:
            # minimal slack 0 met only by trivial combinations so far: look
            # for a nonzero tight inequality coordinate by coordinate
            pinned = cp.base.with_equality(slack, sol.objective)
            columns = cp.link.transpose()
            for j in range(d):
                for sign in (1, -1):
                    probe = lp_minimize(pinned, [sign * v for v in columns[j]])
                    if probe.optimal and probe.objective < 0:
                        candidate = _combination_face(cp, probe.x)
                        break
                if candidate is not None:
                    break
            if candidate is None:
                raise ValueError("the point is strictly interior to the projection")
    facets = to_facets(system, d, candidate)
    certifying = [g for g in facets if dot(g.f, y) <= g.b]
    if not certifying:
        raise AssertionError("implying facet set lost the certificate")
    return certifying


def _combination_face(cp, q) -> Face:
    columns = cp.link.transpose()
    coeffs = [dot(q, columns[j]) for j in range(cp.d)]
    rhs = dot(q, [row.b for row in cp.link.rows])
    return normalize_face(coeffs, rhs)


def _chart(system: ConstraintSystem, bs: BasisSimplex) -> AffineEmbedding:
    """Chart for a flat image.  A cone's affine hull is a linear subspace,
    so its chart is rooted at the apex — that keeps the reduced system
    homogeneous and lets the recursion apply its own cap."""
    if system.homogeneous:
        dirs = [vec_sub(p, bs.base) for p in bs.points[1:]]
        return AffineEmbedding(base=(0,) * len(bs.base), directions=dirs)
    return AffineEmbedding.from_basis(bs)


def _reject_from(face: Face, axis: Face) -> Face:
    """Component of ``axis`` orthogonal to ``face.f`` (offset adjusted the
    same way), preserving the axis' orientation on the face's hyperplane."""
    norm = dot(face.f, face.f)
    lam = rational(dot(axis.f, face.f), norm)
    coeffs = [a - lam * b for a, b in zip(axis.f, face.f)]
    if is_zero_vector(coeffs):
        raise AssertionError("ridge inequality is parallel to its facet")
    return normalize_face(coeffs, axis.b - lam * face.b)


def _walk(work: ConstraintSystem, d: int, depth: int, group, budget: _Budget,
          rng: random.Random, known: Sequence[Face], queue: FacetQueue) -> None:
    """The adjacency walk proper, on a bounded full-dimensional image.

    Mutates ``queue``: explored facets (and their orbits) accumulate in
    ``queue.done``, ridge lists in ``queue.cache``.  Stops early when the
    budget runs out, leaving unexplored facets in ``queue.pending`` so a
    later call can resume.
    """
    if group is not None and group.dim != d:
        raise ValueError("symmetry group dimension does not match the output space")
    for k in known:
        k = as_face(k).pad(d)
        if k not in queue.done:
            queue.pending.add(k)
    if not queue.pending and not queue.done:
        queue.pending.add(get_facet(work, d, seed=rng.randrange(2**32)))
    while queue.pending:
        if budget.denied:
            break
        facet = min(
            queue.pending, key=lambda h: (len(queue.cache.get(h, ())), h)
        )
        queue.pending.discard(facet)
        if facet in queue.done:
            continue
        members = group.orbit(facet) if group is not None else (facet,)
        queue.done.update(members)
        ridges = queue.cache.get(facet)
        if ridges is None:
            sub = work.with_rows([(-facet).pad(work.dim)])
            ridges = tuple(
                _project(sub, d, depth - 1, None, budget, rng, (), None)
            )
            if budget.denied:
                # a leaf call inside the subsolve was refused, so the ridge
                # list may be partial: forget this facet so a resumed run
                # redoes it with fresh budget
                queue.done.difference_update(members)
                queue.pending.add(facet)
                break
            queue.cache[facet] = ridges
        for ridge in ridges:
            axis = _reject_from(facet, ridge)
            neighbor, _ = rotate(work, -facet, axis)
            if neighbor not in queue.done:
                queue.pending.add(neighbor)


def _project(system: ConstraintSystem, d: int, depth: int, group,
             budget: _Budget, rng: random.Random, known: Sequence[Face],
             queue: Optional[FacetQueue]) -> List[Face]:
    """Recursive facet-list driver shared by the complete and budgeted modes."""
    if depth == 0:
        if not budget.take():
            return []
        return chm_project(system, d, group=group).facets
    homogeneous = system.homogeneous
    work = capped(system, d) if homogeneous else system
    bs = basis_simplex(work, d)
    if bs.rank == 0:
        return []
    if bs.rank == 1:
        # a segment's facets are its endpoints, which are not adjacent:
        # the walk cannot connect them, so fall back to the hull projector
        if not budget.take():
            return []
        return chm_project(system, d, group=group).facets
    if bs.rank < d:
        emb = _chart(system, bs)
        reduced = reduce_system(system, d, emb)
        reduced_known = [emb.reduce_face(as_face(k).pad(d)) for k in known]
        inner = _project(reduced, bs.rank, depth, None, budget, rng,
                         reduced_known, queue)
        return sorted(emb.lift_face(f) for f in inner)
    if queue is None:
        queue = FacetQueue()
    _walk(work, d, depth, group, budget, rng, known, queue)
    facets = sorted(queue.done)
    if homogeneous:
        facets = [f for f in facets if f.b == 0]
    return facets


def afi_project(system: ConstraintSystem, d: int,
                cfg: Optional[AfiConfig] = None) -> List[Face]:
    """The complete facet list of the projection via the adjacency walk.

    cfg.depth picks the ridge projector (0 = hull-based, k = walk of depth
    k-1); cfg.group marks whole orbits explored from one representative.
    Cones come back as genuine cone facets (cap artifacts removed).
    """
    cfg = cfg or AfiConfig()
    if not 1 <= d <= system.dim:
        raise ValueError(f"projection dimension {d} out of range")
    rng = random.Random(cfg.seed)
    return _project(system, d, cfg.depth, cfg.group, _Budget(None), rng, (), None)


def rfd(system: ConstraintSystem, d: int, cfg: AfiConfig,
        known: Iterable = (), state: Optional[FacetQueue] = None,
        validate_known: bool = True) -> List[Face]:
    """Randomized facet discovery: the adjacency walk with a global budget
    of hull-projector leaf calls.

    Returns the (sound, possibly partial) facet list discovered before the
    budget ran out.  ``known`` facets seed the queue; facets with the fewest
    cached ridges are explored first.  Passing a ``state`` object makes the
    run resumable: unexplored facets stay pending and ridge caches carry
    over.  ``validate_known=False`` skips the facet check for faces replayed
    from a trusted earlier run.
    """
    if cfg.rfd_budget is None or cfg.rfd_budget < 1:
        raise ValueError("rfd requires rfd_budget >= 1")
    if not 1 <= d <= system.dim:
        raise ValueError(f"projection dimension {d} out of range")
    known = [as_face(k).pad(d) for k in known]
    if known and validate_known:
        work = capped(system, d) if system.homogeneous else system
        rank = basis_simplex(work, d).rank
        for k in known:
            if not is_implied(work, k.pad(work.dim)):
                raise ValueError(f"known face {k} is not valid on the projection")
            if face_rank(work, d, k) != rank - 1:
                raise ValueError(f"known face {k} is not a facet")
    rng = random.Random(cfg.seed)
    return _project(system, d, cfg.depth, cfg.group, _Budget(cfg.rfd_budget),
                    rng, known, state)
