"""
Exact convex hull of rational points, as a list of facet inequalities.

The facets of conv(points) in R^k are computed as the extreme rays of the
polar-style cone

    C = {(f, b) in R^(k+1) : f . p - b >= 0 for every point p},

which is pointed and full-dimensional exactly when the points affinely span
R^k.  Rays are maintained by the double-description method: start from the
simplicial cone cut out by k+1 affinely independent points (whose rays are
the columns of the inverse constraint matrix), then insert the remaining
points one at a time, combining adjacent rays across the new hyperplane.
The structure is incremental: callers may keep inserting points and reading
off the current facet list, which is how the projection driver avoids
recomputing hulls from scratch while it discovers vertices.

Two rays are adjacent iff no third ray is tight on every constraint they are
both tight on; tight sets are tracked as bitmasks over the points processed
so far.  A combined ray s+ . r-  +  (-s-) . r+ is tight on an old constraint
iff both parents are (a positive combination of nonnegative values), so the
new mask is exactly (mask+ & mask-) | new_bit.

Every ray of the final cone with f != 0 is a facet of the hull; f = 0 cannot
occur for an extreme ray (such a ray would be interior).
"""

from typing import List, Sequence, Tuple

from .geometry import DegenerateInput
from .lp import Face, normalize_face
from .rationals import dot, mpq, rational, scale_to_coprime_ints


def _affinely_independent_subset(points: List[Tuple], k: int) -> List[int]:
    """Indices of k+1 points spanning R^k affinely, greedily by exact rank."""
    chosen = [0]
    rows = []  # rref state of the difference vectors
    for idx in range(1, len(points)):
        if len(chosen) == k + 1:
            break
        diff = [mpq(a) - mpq(b) for a, b in zip(points[idx], points[chosen[0]])]
        # reduce against current rows
        for pivot_col, row in rows:
            if diff[pivot_col] != 0:
                factor = mpq(diff[pivot_col]) / row[pivot_col]
                diff = [d - factor * r for d, r in zip(diff, row)]
        pivot_col = next((j for j, v in enumerate(diff) if v != 0), None)
        if pivot_col is None:
            continue
        rows.append((pivot_col, diff))
        chosen.append(idx)
    if len(chosen) != k + 1:
        raise DegenerateInput(
            "points span an affine subspace of dimension %d < %d"
            % (len(chosen) - 1, k)
        )
    return chosen


def _solve_inverse_columns(mat: List[List]) -> List[List]:
    """Columns of mat^-1 for a square exact matrix (raises if singular)."""
    n = len(mat)
    aug = [[mpq(v) for v in row] + [mpq(1) if i == j else mpq(0) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            raise DegenerateInput("singular initial simplex")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[col])]
    return [[aug[i][n + j] for i in range(n)] for j in range(n)]


class _Ray:
    __slots__ = ("vec", "mask")

    def __init__(self, vec: Tuple, mask: int):
        self.vec = scale_to_coprime_ints(vec)
        self.mask = mask


class IncrementalHull:
    """Double-description state for conv(points), extensible point by point."""

    def __init__(self, points: Sequence[Sequence]):
        pts = [tuple(rational(c) for c in p) for p in points]
        if not pts:
            raise DegenerateInput("no points")
        self.k = len(pts[0])
        if self.k == 0:
            raise DegenerateInput("zero-dimensional ambient space")
        if any(len(p) != self.k for p in pts):
            raise ValueError("points of mixed dimensions")

        init = _affinely_independent_subset(pts, self.k)
        # Constraint normal for point p is (p, -1) acting on (f, b).
        mat = [list(pts[i]) + [-1] for i in init]
        self._rays: List[_Ray] = []
        for j, col in enumerate(_solve_inverse_columns(mat)):
            # Ray j is tight on every initial constraint except the j-th.
            mask = 0
            for pos in range(len(init)):
                if pos != j:
                    mask |= 1 << init[pos]
            self._rays.append(_Ray(tuple(col), mask))

        self.points: List[Tuple] = pts
        self._seen = set(pts)
        done = set(init)
        for i in range(len(pts)):
            if i not in done:
                self._insert(i)

    def add_point(self, point: Sequence) -> bool:
        """Insert one more point; returns False if it was already present."""
        p = tuple(rational(c) for c in point)
        if len(p) != self.k:
            raise ValueError("point of wrong dimension")
        if p in self._seen:
            return False
        self.points.append(p)
        self._seen.add(p)
        self._insert(len(self.points) - 1)
        return True

    def __contains__(self, point: Sequence) -> bool:
        return tuple(rational(c) for c in point) in self._seen

    def _insert(self, i: int) -> None:
        normal = list(self.points[i]) + [-1]
        rays = self._rays
        values = [dot(normal, r.vec) for r in rays]
        bit = 1 << i
        if all(v >= 0 for v in values):
            for r, v in zip(rays, values):
                if v == 0:
                    r.mask |= bit
            return
        keep, pos, neg = [], [], []
        for r, v in zip(rays, values):
            if v > 0:
                pos.append((r, v))
                keep.append(r)
            elif v == 0:
                r.mask |= bit
                keep.append(r)
            else:
                neg.append((r, v))
        required = self.k + 1 - 2  # a 2-face of a pointed cone in R^(k+1)
        masks = [r.mask for r in rays]
        new_rays = []
        for (rp, vp), (rn, vn) in ((a, b) for a in pos for b in neg):
            common = rp.mask & rn.mask
            if common.bit_count() < required:
                continue
            if any(
                m & common == common
                for r3, m in zip(rays, masks)
                if r3 is not rp and r3 is not rn
            ):
                continue
            vec = tuple(vp * x - vn * y for x, y in zip(rn.vec, rp.vec))
            new_rays.append(_Ray(vec, common | bit))
        self._rays = keep + new_rays

    def facets(self) -> List[Face]:
        """Current facet list, normalized and sorted."""
        out = []
        for r in self._rays:
            f, b = r.vec[:-1], r.vec[-1]
            if all(c == 0 for c in f):
                raise AssertionError("interior direction reported as extreme ray")
            out.append(normalize_face(f, b))
        return sorted(set(out))

    def vertex_points(self) -> List[Tuple]:
        """Inserted points that are vertices (tight on >= k facets)."""
        counts = [0] * len(self.points)
        for r in self._rays:
            mask = r.mask
            while mask:
                low = mask & -mask
                counts[low.bit_length() - 1] += 1
                mask ^= low
        return [p for p, c in zip(self.points, counts) if c >= self.k]


def convex_hull(points: Sequence[Sequence]) -> List[Face]:
    """
    Facet inequalities f . x >= b of conv(points), normalized and sorted.
    The points must affinely span their ambient space.
    """
    return IncrementalHull(points).facets()
