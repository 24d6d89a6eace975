"""Partial order, meet, and the tree metric on reduced paths.

The reduced paths from a common origin, ordered by "is an initial piece
of" (up to reparametrisation, with partial overlap of a final segment
allowed), form a rooted tree: any two points have a well-defined meet,
the longest common prefix.  With h = (1-variation)^p,

    d(a, b) = h(a) + h(b) - 2 h(a `meet` b)

is a metric satisfying the four-point condition, which certifies that the
space is a real tree.  At p = 1 with Fraction coordinates and rational
segment lengths everything is exact, so the four-point condition can be
checked with zero tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .paths import GroupPath, PolyPath, euclidean_distance, p_variation, p_variation_power
from .reduction import ReducedPath, _collinearity, _is_zero_seg, _path_scale, is_tree_like, reduce

__all__ = [
    "TreePoint",
    "PrefixOrder",
    "prefix_order",
    "meet",
    "tree_distance",
    "tree_factorization",
    "TreeFactorization",
    "concat_continuity_gap",
    "sample_rational_forest",
    "four_point_report",
    "FourPointReport",
]


class PrefixOrder(Enum):
    LESS_EQUAL = "less-equal"
    GREATER_EQUAL = "greater-equal"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


class TreePoint:
    """A reduced path from the origin, identified with a tree point."""

    __slots__ = ("reduced",)

    def __init__(self, path, origin_tol=1e-9):
        if isinstance(path, ReducedPath):
            path = path.inner
        rp = reduce(path)
        start = rp.inner.vertices[0]
        if rp.inner.is_exact():
            if any(c != 0 for c in start):
                raise ValueError("TreePoint paths must start at the origin")
        elif float(np.abs(np.asarray(start, dtype=np.float64)).max(initial=0.0)) > origin_tol:
            raise ValueError("TreePoint paths must start at the origin")
        object.__setattr__(self, "reduced", rp)

    def __setattr__(self, name, value):
        raise AttributeError("TreePoint is immutable")

    @classmethod
    def rooted(cls, path):
        """Build a TreePoint from a path based anywhere, shifting it to 0."""
        inner = path.inner if isinstance(path, ReducedPath) else path
        return cls(inner.based_at_origin())

    @property
    def dim(self):
        return self.reduced.inner.dim

    @property
    def n_segments(self):
        return self.reduced.inner.n_segments

    def segments(self):
        return list(self.reduced.inner.segment_vectors())

    def endpoint(self):
        return self.reduced.inner.vertices[-1]

    def prefix(self, k):
        return TreePoint(self.reduced.inner.prefix(k))

    def variation_power(self, p=1):
        """(p-variation)^p of the reduced path.

        At p = 1 this is the total segment length (the full partition
        attains the supremum by the triangle inequality), computed exactly
        for Fraction coordinates with rational segment lengths.
        """
        inner = self.reduced.inner
        if p == 1:
            zero = inner.vertices[0] - inner.vertices[0]
            total = 0
            for s in inner.segment_vectors():
                total = total + euclidean_distance(s, zero)
            return total
        return p_variation_power(list(inner.vertices), p)

    def __repr__(self):
        return f"TreePoint(dim={self.dim}, n_segments={self.n_segments})"


def _segments_equal(a, b, scale):
    return _is_zero_seg(a - b, scale)


def _compare_scale(a, b):
    sa = _path_scale(a.reduced.inner.vertices)
    sb = _path_scale(b.reduced.inner.vertices)
    if sa is None or sb is None:
        return None
    return max(sa, sb)


def _norm_sq(v):
    return sum(c * c for c in v) if isinstance(v, np.ndarray) and v.dtype == object else float(np.dot(v, v))


def prefix_order(a, b):
    """Compare two tree points: one is below the other iff its segment
    sequence is an initial piece of the other's, where the last segment may
    overlap partially (same direction, shorter)."""
    if a.dim != b.dim:
        raise ValueError("tree points must share the ambient dimension")
    scale = _compare_scale(a, b)
    sa, sb = a.segments(), b.segments()
    na, nb = len(sa), len(sb)
    for i in range(min(na, nb)):
        if _segments_equal(sa[i], sb[i], scale):
            continue
        col, same = _collinearity(sa[i], sb[i])
        if col and same:
            if _norm_sq(sa[i]) < _norm_sq(sb[i]):
                return PrefixOrder.LESS_EQUAL if i == na - 1 else PrefixOrder.INCOMPARABLE
            return PrefixOrder.GREATER_EQUAL if i == nb - 1 else PrefixOrder.INCOMPARABLE
        return PrefixOrder.INCOMPARABLE
    if na == nb:
        return PrefixOrder.EQUAL
    return PrefixOrder.LESS_EQUAL if na < nb else PrefixOrder.GREATER_EQUAL


def meet(a, b):
    """Longest common prefix of two tree points (partial overlap of the
    first differing segment included when it points the same way)."""
    if a.dim != b.dim:
        raise ValueError("tree points must share the ambient dimension")
    scale = _compare_scale(a, b)
    sa, sb = a.segments(), b.segments()
    origin = a.reduced.inner.vertices[0]
    verts = [origin]
    for x, y in zip(sa, sb):
        if _segments_equal(x, y, scale):
            verts.append(verts[-1] + x)
            continue
        col, same = _collinearity(x, y)
        if col and same:
            shorter = x if _norm_sq(x) < _norm_sq(y) else y
            verts.append(verts[-1] + shorter)
        break
    return TreePoint(PolyPath(np.array(verts, dtype=a.reduced.inner.vertices.dtype)))


def tree_distance(a, b, p=1):
    """h(a) + h(b) - 2 h(meet) with h = (p-variation)^p; at p = 1 this is
    the tree path-length distance and is exact for Fraction data."""
    return a.variation_power(p) + b.variation_power(p) - 2 * meet(a, b).variation_power(p)


# ---------------------------------------------------------------------------
# tree-like factorisation evidence

@dataclass(frozen=True)
class TreeFactorization:
    """Vertex-time tree points phi, the endpoint-recovery check, and the
    heights (tree distance to the root)."""

    phi: tuple
    psi_check: bool
    heights: tuple


def tree_factorization(x, tol=1e-9):
    """Factor a tree-like path through the reduced-path tree.

    phi(t_k) is the reduced prefix through vertex k (shifted to the
    origin); evaluating the endpoint of phi(t_k) reproduces x_{t_k}
    (psi_check); heights are the tree distances to the root.
    """
    if not is_tree_like(x):
        raise ValueError("tree factorization requires a tree-like path")
    x0 = x.vertices[0]
    phi = []
    heights = []
    psi_ok = True
    root = TreePoint(PolyPath.constant(np.zeros(x.dim)))
    for k in range(x.n_vertices):
        tp = TreePoint(x.prefix(k).based_at_origin())
        phi.append(tp)
        heights.append(tree_distance(tp, root, p=1))
        recovered = tp.endpoint() + x0
        if float(np.abs(recovered - x.vertices[k]).max()) > tol:
            psi_ok = False
    return TreeFactorization(tuple(phi), psi_ok, tuple(heights))


def concat_continuity_gap(group_path, s_index, p):
    """Both sides of the right-concatenation continuity estimate at a
    sample index: (total^p - head^p, (1+p) * total^(p-1) * tail).

    The left side never exceeds the right side.
    """
    if not isinstance(group_path, GroupPath):
        raise TypeError("expected a GroupPath")
    n = len(group_path)
    if not 0 <= s_index <= n - 1:
        raise ValueError(f"sample index {s_index} outside 0..{n - 1}")
    total_pow = float(group_path.p_variation_power(p))
    head_pow = float(group_path.restrict(0, s_index).p_variation_power(p))
    tail_var = float(group_path.restrict(s_index, n - 1).p_variation(p))
    total_var = total_pow ** (1.0 / p)
    lhs = total_pow - head_pow
    rhs = (1.0 + p) * total_var ** (p - 1.0) * tail_var
    return lhs, rhs


# ---------------------------------------------------------------------------
# exact rational forests and the four-point certificate

# rational unit vectors in the plane (axes plus Pythagorean directions)
_RATIONAL_DIRECTIONS = [
    (Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(1)),
    (Fraction(-1), Fraction(0)),
    (Fraction(0), Fraction(-1)),
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(-3, 5), Fraction(4, 5)),
    (Fraction(3, 5), Fraction(-4, 5)),
    (Fraction(-3, 5), Fraction(-4, 5)),
    (Fraction(4, 5), Fraction(3, 5)),
    (Fraction(-4, 5), Fraction(3, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(12, 13), Fraction(-5, 13)),
]


def sample_rational_forest(seed, n_points=12, max_children=3):
    """Random rooted tree with Fraction vertices and rational segment
    lengths; returns the root-to-node reduced paths as TreePoints.

    All segment lengths are rational (unit rational directions scaled by
    rationals), so 1-variations, meets, and tree distances are exact.
    """
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    dirs = _RATIONAL_DIRECTIONS
    origin = np.array([Fraction(0), Fraction(0)], dtype=object)
    # nodes: (vertex list, incoming direction index or None, child count)
    nodes = [([origin], None, 0)]
    points = []
    while len(points) < n_points:
        idx = int(rng.integers(len(nodes)))
        verts, incoming, n_children = nodes[idx]
        if n_children >= max_children:
            continue
        choices = [
            k
            for k in range(len(dirs))
            if incoming is None or not _collinear_dirs(dirs[k], dirs[incoming])
        ]
        k = choices[int(rng.integers(len(choices)))]
        length = Fraction(int(rng.integers(1, 8)), int(rng.integers(1, 5)))
        step = np.array([dirs[k][0] * length, dirs[k][1] * length], dtype=object)
        new_verts = verts + [verts[-1] + step]
        nodes[idx] = (verts, incoming, n_children + 1)
        nodes.append((new_verts, k, 0))
        points.append(TreePoint(PolyPath(np.array(new_verts, dtype=object))))
    return points


def _collinear_dirs(u, v):
    return u[0] * v[1] - u[1] * v[0] == 0


@dataclass(frozen=True)
class FourPointReport:
    n_points: int
    n_checked: int
    violations: tuple
    exact: bool


def four_point_report(points, p=1):
    """Exhaustive four-point condition over all 4-subsets:
    d(a,b) + d(c,e) <= max(d(a,c) + d(b,e), d(a,e) + d(b,c)).

    Distances are computed once per pair; with Fraction data and p = 1 the
    comparisons are exact.
    """
    pts = list(points)
    n = len(pts)
    dist = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = tree_distance(pts[i], pts[j], p)

    def d(i, j):
        return dist[min(i, j), max(i, j)]

    violations = []
    n_checked = 0
    for quad in itertools.combinations(range(n), 4):
        a, b, c, e = quad
        for x, y, z, w in ((a, b, c, e), (a, c, b, e), (a, e, b, c)):
            n_checked += 1
            lhs = d(x, y) + d(z, w)
            rhs = max(d(x, z) + d(y, w), d(x, w) + d(y, z))
            if lhs > rhs:
                violations.append((x, y, z, w))
    exact = all(tp.reduced.inner.is_exact() for tp in pts) and p == 1
    return FourPointReport(n, n_checked, tuple(violations), exact)
