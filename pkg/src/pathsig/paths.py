"""Piecewise-linear path containers and p-variation machinery.

A :class:`PolyPath` is an ordered sequence of vertices in R^d with
optional strictly increasing time stamps.  A :class:`GroupPath` is a
sampled path of group elements of a common dim/depth.

p-variation is computed over the sampled points only, by the O(n^2)
dynamic program over index pairs.  For a piecewise-linear path this is
exact: since p >= 1, splitting a straight segment at an interior point
never increases the sum, so the supremum over all partitions is attained
on a subset of the vertices.  For a sampled group path it is the
restriction of the true supremum to the sample times, i.e. a lower-bound
estimator.

Vertices of dtype ``object`` (``fractions.Fraction`` entries) are carried
exactly; Euclidean lengths are then evaluated with an exact rational
square root and raise if the squared length is not a perfect square.
"""

from __future__ import annotations

import csv
import math
from fractions import Fraction

import numpy as np

from .tensor_algebra import GroupElement, group_distance, group_inverse, level_norm, tensor_mul

__all__ = [
    "PolyPath",
    "GroupPath",
    "concat",
    "reverse",
    "p_variation",
    "p_variation_power",
    "pvar_distance",
    "euclidean_distance",
    "exact_sqrt",
    "read_path_csv",
    "write_path_csv",
    "CsvFormatError",
]


# ---------------------------------------------------------------------------
# exact/float scalar helpers

def exact_sqrt(q):
    """Square root of a nonnegative Fraction that must be a perfect square."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative value")
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ValueError(f"{q} has no rational square root")
    return Fraction(num, den)


def _is_exact_array(a):
    return isinstance(a, np.ndarray) and a.dtype == object


def euclidean_distance(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    diff = a - b
    if _is_exact_array(diff):
        return exact_sqrt(sum(c * c for c in diff))
    return float(np.sqrt(np.dot(diff, diff)))


# ---------------------------------------------------------------------------
# PolyPath

class PolyPath:
    """Piecewise-linear path given by its vertices (rows of an (n, d) array)."""

    __slots__ = ("dim", "vertices", "times")

    def __init__(self, vertices, times=None):
        v = np.asarray(vertices)
        if v.dtype != object:
            v = v.astype(np.float64, copy=True)
        else:
            v = v.copy()
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("vertices must be a nonempty (n, d) array")
        v.setflags(write=False)
        if times is not None:
            times = np.asarray(times, dtype=np.float64).copy()
            if times.shape != (v.shape[0],):
                raise ValueError("times must match the number of vertices")
            if np.any(np.diff(times) <= 0):
                raise ValueError("times must be strictly increasing")
            times.setflags(write=False)
        object.__setattr__(self, "dim", int(v.shape[1]))
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "times", times)

    def __setattr__(self, name, value):
        raise AttributeError("PolyPath is immutable")

    @classmethod
    def constant(cls, point):
        return cls(np.asarray(point).reshape(1, -1))

    @classmethod
    def from_segments(cls, start, segment_vectors):
        verts = [np.asarray(start, dtype=np.float64)]
        for s in segment_vectors:
            verts.append(verts[-1] + np.asarray(s, dtype=np.float64))
        return cls(np.array(verts))

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_segments(self):
        return self.vertices.shape[0] - 1

    def segment_vectors(self):
        return self.vertices[1:] - self.vertices[:-1]

    def natural_times(self):
        """Time stamps if present, else the uniform parametrisation on [0,1]."""
        if self.times is not None:
            return self.times
        n = self.n_vertices
        if n == 1:
            return np.array([0.0])
        return np.linspace(0.0, 1.0, n)

    def point_at(self, t):
        """Linear interpolation at parameter t (clamped to the time range)."""
        times = self.natural_times()
        v = self.vertices
        if t <= times[0]:
            return v[0]
        if t >= times[-1]:
            return v[-1]
        k = int(np.searchsorted(times, t, side="right")) - 1
        w = (t - times[k]) / (times[k + 1] - times[k])
        return v[k] + w * (v[k + 1] - v[k])

    def prefix(self, k):
        """Sub-path through the first k segments (k+1 vertices)."""
        t = None if self.times is None else self.times[: k + 1]
        return PolyPath(self.vertices[: k + 1], t)

    def translated(self, offset):
        return PolyPath(self.vertices + np.asarray(offset), self.times)

    def based_at_origin(self):
        return self.translated(-self.vertices[0])

    def is_exact(self):
        return self.vertices.dtype == object

    def __repr__(self):
        return f"PolyPath(dim={self.dim}, n_vertices={self.n_vertices})"


def concat(x, y):
    """Concatenation: y is translated so that it starts at x's endpoint."""
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    shifted = y.vertices - y.vertices[0] + x.vertices[-1]
    verts = np.vstack([x.vertices, shifted[1:]])
    times = None
    if x.times is not None and y.times is not None:
        times = np.concatenate([x.times, x.times[-1] + (y.times - y.times[0])[1:]])
    return PolyPath(verts, times)


def reverse(x):
    """Run the path backwards."""
    times = None
    if x.times is not None:
        times = x.times[-1] - x.times[::-1]
    return PolyPath(x.vertices[::-1], times)


# ---------------------------------------------------------------------------
# p-variation

def _pair_dist_fn(points, dist):
    pts = list(points)
    if dist is None:
        if pts and isinstance(pts[0], GroupElement):
            dist = group_distance
        else:
            dist = euclidean_distance
    return pts, lambda i, j: dist(pts[i], pts[j])


def p_variation_power(points, p, dist=None):
    """max over increasing index subsequences of sum d(x_i, x_j)^p.

    This is the p-th power of the p-variation; at p == 1 it is returned
    without any floating conversion so Fraction inputs stay exact.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    pts, d = _pair_dist_fn(points, dist)
    n = len(pts)
    if n <= 1:
        return 0

    def powered(val):
        if p == 1:
            return val
        if isinstance(val, Fraction):
            if float(p).is_integer():
                return val ** int(p)
            val = float(val)
        return val**p

    cum = [0] * n
    for j in range(1, n):
        best = None
        for m in range(j):
            val = cum[m] + powered(d(m, j))
            if best is None or val > best:
                best = val
        cum[j] = best
    return cum[-1]

def p_variation(points, p, dist=None):
    """The p-variation of the sampled points: (sup sum d^p)^(1/p)."""
    power = p_variation_power(points, p, dist)
    if p == 1:
        return power
    return float(power) ** (1.0 / p)


# ---------------------------------------------------------------------------
# GroupPath

class GroupPath:
    """Increasing-time samples of a group-valued path (common dim/depth)."""

    __slots__ = ("samples", "times", "dim", "depth")

    def __init__(self, samples, times=None):
        samples = tuple(samples)
        if not samples:
            raise ValueError("GroupPath needs at least one sample")
        dim, depth = samples[0].dim, samples[0].depth
        for g in samples:
            if not isinstance(g, GroupElement):
                raise TypeError("GroupPath samples must be GroupElements")
            if g.dim != dim or g.depth != depth:
                raise ValueError("GroupPath samples must share dim and depth")
        if times is not None:
            times = np.asarray(times, dtype=np.float64).copy()
            if times.shape != (len(samples),):
                raise ValueError("times must match the number of samples")
            if np.any(np.diff(times) <= 0):
                raise ValueError("times must be strictly increasing")
            times.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "depth", depth)

    def __setattr__(self, name, value):
        raise AttributeError("GroupPath is immutable")

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, k):
        return self.samples[k]

    @property
    def has_repeated_points(self):
        return any(
            max_diff == 0.0
            for max_diff in (
                max(level_norm(a.levels[n] - b.levels[n]) for n in range(self.depth + 1))
                for a, b in zip(self.samples, self.samples[1:])
            )
        )

    def increment(self, j):
        """Group increment between consecutive samples j and j+1."""
        return tensor_mul(group_inverse(self.samples[j]), self.samples[j + 1])

    def restrict(self, i, j):
        t = None if self.times is None else self.times[i : j + 1]
        return GroupPath(self.samples[i : j + 1], t)

    def p_variation(self, p):
        return p_variation(self.samples, p, dist=group_distance)

    def p_variation_power(self, p):
        return p_variation_power(self.samples, p, dist=group_distance)


def pvar_distance(x, y, p, *, start_tol=1e-9):
    """Sampled p-variation distance between two group paths.

    ``max over levels i <= floor(p)`` of the DP supremum of
    ``|level_i(x_m^-1 x_j - y_m^-1 y_j)|^(p/i)`` sums, raised to ``i/p``.
    Requires matching sample times, dim, depth and equal starting points.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if len(x) != len(y):
        raise ValueError("group paths must have the same number of samples")
    if x.dim != y.dim or x.depth != y.depth:
        raise ValueError("group paths must share dim and depth")
    if x.times is not None and y.times is not None and not np.array_equal(x.times, y.times):
        raise ValueError("group paths must share sample times")
    start_gap = max(
        level_norm(a - b) for a, b in zip(x.samples[0].levels, y.samples[0].levels)
    )
    if start_gap > start_tol:
        raise ValueError("group paths must have equal starting points")
    n = len(x)
    if n == 1:
        return 0.0
    inv_x = [group_inverse(g) for g in x.samples]
    inv_y = [group_inverse(g) for g in y.samples]

    cache = {}

    def level_gap(m, j, i):
        key = (m, j)
        if key not in cache:
            gx = tensor_mul(inv_x[m], x.samples[j])
            gy = tensor_mul(inv_y[m], y.samples[j])
            cache[key] = [level_norm(a - b) for a, b in zip(gx.levels, gy.levels)]
        return cache[key][i]

    best = 0.0
    for i in range(1, int(math.floor(p)) + 1):
        idx = list(range(n))
        val = p_variation_power(idx, p / i, dist=lambda m, j: level_gap(m, j, i))
        best = max(best, float(val) ** (i / p))
    return best


# ---------------------------------------------------------------------------
# CSV interchange

class CsvFormatError(ValueError):
    """Malformed path CSV; carries a 1-based line and column."""

    def __init__(self, line, column, message):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def read_path_csv(source):
    """Read a PolyPath from CSV: one row per vertex, columns x1..xd, with an
    optional leading t column.  A header is auto-detected; the t column is
    recognised from the header name."""
    if isinstance(source, (str, bytes)):
        with open(source, newline="") as fh:
            rows = list(csv.reader(fh))
    else:
        rows = list(csv.reader(source))
    rows = [(i + 1, row) for i, row in enumerate(rows) if any(c.strip() for c in row)]
    if not rows:
        raise CsvFormatError(1, 1, "empty path file")

    def parse_row(lineno, row):
        out = []
        for col, tok in enumerate(row, start=1):
            tok = tok.strip()
            try:
                out.append(float(tok))
            except ValueError:
                raise CsvFormatError(lineno, col, f"could not parse {tok!r} as a number") from None
        return out

    header = None
    first_line, first_row = rows[0]
    try:
        parse_row(first_line, first_row)
    except CsvFormatError:
        header = [c.strip().lower() for c in first_row]
        rows = rows[1:]
        if not rows:
            raise CsvFormatError(first_line, 1, "no data rows after header") from None
    has_time = header is not None and header and header[0] in ("t", "time")

    width = len(rows[0][1])
    data, times = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise CsvFormatError(lineno, 1, f"expected {width} columns, found {len(row)}")
        vals = parse_row(lineno, row)
        if has_time:
            times.append(vals[0])
            data.append(vals[1:])
        else:
            data.append(vals)
    if not data or not data[0]:
        raise CsvFormatError(rows[0][0], 1, "no coordinate columns")
    try:
        return PolyPath(np.array(data), np.array(times) if has_time else None)
    except ValueError as e:
        raise CsvFormatError(rows[0][0], 1, str(e)) from None


def write_path_csv(path, target, include_times=None):
    """Write a PolyPath as CSV with a header row."""
    if include_times is None:
        include_times = path.times is not None
    header = (["t"] if include_times else []) + [f"x{i}" for i in range(1, path.dim + 1)]
    times = path.natural_times()

    def emit(fh):
        w = csv.writer(fh)
        w.writerow(header)
        for k in range(path.n_vertices):
            row = [repr(float(c)) for c in path.vertices[k]]
            if include_times:
                row = [repr(float(times[k]))] + row
            w.writerow(row)

    if isinstance(target, (str, bytes)):
        with open(target, "w", newline="") as fh:
            emit(fh)
    else:
        emit(target)
