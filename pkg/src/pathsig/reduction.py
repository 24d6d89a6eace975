"""Reduced paths, tree-likeness, loop erasure, and tree-like test data.

The reduced form of a piecewise-linear path is computed by backtrack
cancellation: a segment followed by a collinear opposite-direction segment
cancels on their overlap, with any excess retained, interleaved with
merging of consecutive same-direction collinear segments.  This preserves
the signature at every cancellation step, unlike loop erasure, which
preserves only the image (and is provided separately as
:func:`erase_loops`).

Collinearity is decided on cross terms with relative tolerance 1e-12;
paths with ``fractions.Fraction`` vertices (dtype object) are handled
exactly, with zero tolerance.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .paths import PolyPath

__all__ = [
    "ReducedPath",
    "normalize",
    "reduce",
    "is_tree_like",
    "erase_loops",
    "LoopErasure",
    "height_function",
    "sample_tree_like",
    "insert_spurs",
    "random_reduced_path",
    "COLLINEARITY_RTOL",
]

COLLINEARITY_RTOL = 1e-12


# ---------------------------------------------------------------------------
# segment geometry (float with tolerance, Fraction exactly)

def _is_exact(v):
    return isinstance(v, np.ndarray) and v.dtype == object


def _path_scale(vertices):
    if _is_exact(vertices):
        return None
    m = float(np.abs(vertices).max()) if vertices.size else 0.0
    return max(m, 1.0)


def _is_zero_seg(v, scale):
    if _is_exact(v):
        return all(c == 0 for c in v)
    return bool(np.abs(v).max() <= COLLINEARITY_RTOL * scale)


def _collinearity(a, b):
    """(collinear, same_direction) for two nonzero segment vectors."""
    if _is_exact(a) or _is_exact(b):
        d = len(a)
        for i in range(d):
            for j in range(i + 1, d):
                if a[i] * b[j] - a[j] * b[i] != 0:
                    return False, False
        return True, sum(x * y for x, y in zip(a, b)) > 0
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    cross = np.abs(np.outer(a, b) - np.outer(b, a)).max()
    if cross > COLLINEARITY_RTOL * na * nb:
        return False, False
    return True, bool(np.dot(a, b) > 0)


# ---------------------------------------------------------------------------
# normal forms

def normalize(x):
    """Drop zero-length segments and merge consecutive same-direction
    collinear segments; image and signature are unchanged."""
    verts = _normalize_vertices(x.vertices)
    return PolyPath(np.array(verts, dtype=x.vertices.dtype))


def _normalize_vertices(vertices):
    scale = _path_scale(vertices)
    verts = [vertices[0]]
    for target in vertices[1:]:
        seg = target - verts[-1]
        if _is_zero_seg(seg, scale):
            continue
        if len(verts) >= 2:
            col, same = _collinearity(verts[-1] - verts[-2], seg)
            if col and same:
                verts[-1] = target
                continue
        verts.append(target)
    return verts


@dataclass(frozen=True)
class ReducedPath:
    """Backtrack-free normal form; same signature as the path it reduces."""

    inner: PolyPath

    @property
    def is_constant(self):
        return self.inner.n_vertices == 1

    @property
    def endpoint(self):
        return self.inner.vertices[-1]


def _reduce_vertices(vertices, record_lengths=False):
    """Stack pass performing backtrack cancellation plus merging.

    With record_lengths=True, also returns the total stack length after
    each input vertex was consumed (the 1-variation of the reduced prefix).
    """
    scale = _path_scale(vertices)
    exact = _is_exact(vertices)

    def seg_len(v):
        if not record_lengths:
            return None
        if exact:
            return _fraction_norm_or_float(v)
        return float(np.linalg.norm(v))

    verts = [vertices[0]]
    lengths = []
    trace = [0 if exact else 0.0]
    for target in vertices[1:]:
        # the in-flight segment always ends at `target`, whatever gets
        # cancelled below it, so stored endpoints stay exact
        seg = target - verts[-1]
        while True:
            if _is_zero_seg(seg, scale):
                break
            if len(verts) >= 2:
                top = verts[-1] - verts[-2]
                col, same = _collinearity(top, seg)
                if col and same:
                    verts[-1] = target
                    lengths[-1] = seg_len(verts[-1] - verts[-2])
                    break
                if col and not same:
                    residual = top + seg
                    if _is_zero_seg(residual, scale):
                        verts.pop()
                        lengths.pop()
                        break
                    _, res_same_as_top = _collinearity(top, residual)
                    if res_same_as_top:
                        # partial backtrack: the top shortens
                        verts[-1] = target
                        lengths[-1] = seg_len(verts[-1] - verts[-2])
                        break
                    # overshoot: the top cancels entirely, excess continues
                    verts.pop()
                    lengths.pop()
                    seg = target - verts[-1]
                    continue
            verts.append(target)
            lengths.append(seg_len(verts[-1] - verts[-2]))
            break
        if record_lengths:
            trace.append(sum(lengths) if lengths else (0 if exact else 0.0))
    if record_lengths:
        return verts, trace
    return verts


def _fraction_norm_or_float(v):
    from .paths import exact_sqrt

    return exact_sqrt(sum(c * c for c in v))


def reduce(x):
    """Reduced form of a piecewise-linear path.

    Adjacent backtracks are cancelled (deleting the overlap of a segment
    and a following collinear opposite-direction segment, keeping any
    excess) and same-direction collinear neighbours are merged, until no
    backtrack remains.  Start and endpoint are preserved; the result's
    vertices all lie on the image of the input.
    """
    verts = _reduce_vertices(x.vertices)
    return ReducedPath(PolyPath(np.array(verts, dtype=x.vertices.dtype)))


def is_tree_like(x):
    """True iff the path reduces to a constant."""
    return reduce(x).is_constant


# ---------------------------------------------------------------------------
# loop erasure (image-preserving, not signature-preserving)

LoopErasure = namedtuple("LoopErasure", ["points", "collapsed"])


def _point_key(p):
    if isinstance(p, np.ndarray):
        return tuple(p.tolist())
    return p


def erase_loops(samples):
    """First-return loop erasure on a finite sample sequence.

    Scanning forward, revisiting a value already on the current stack pops
    back to its first occurrence.  The result is injective, runs from the
    first to the last sample, and visits only input values.  A rooted loop
    (first == last) collapses to its root, flagged via ``collapsed``.
    """
    pts = list(samples)
    if not pts:
        raise ValueError("erase_loops needs at least one sample")
    keys = [_point_key(p) for p in pts]
    if keys[0] == keys[-1]:
        return LoopErasure([pts[0]], True)
    stack_keys, stack_pts = [], []
    index = {}
    for k, p in zip(keys, pts):
        if k in index:
            cut = index[k] + 1
            for kk in stack_keys[cut:]:
                del index[kk]
            del stack_keys[cut:]
            del stack_pts[cut:]
        else:
            index[k] = len(stack_keys)
            stack_keys.append(k)
            stack_pts.append(p)
    return LoopErasure(stack_pts, False)


# ---------------------------------------------------------------------------
# height function of a tree-like path

def height_function(x):
    """Heights h(t_k) = 1-variation of the reduced prefix through vertex k.

    Only defined for tree-like paths (h(0) = h(T) = 0); for them, equal
    heights at s < t that are minimal on [s, t] force x_s = x_t.
    """
    verts, trace = _reduce_vertices(x.vertices, record_lengths=True)
    if len(verts) != 1:
        raise ValueError(
            f"path is not tree-like: its reduced form has {len(verts) - 1} segments"
        )
    return trace


# ---------------------------------------------------------------------------
# generators for tree-like and reduced test data

def sample_tree_like(seed, n_moves, dim):
    """Random rooted tree walk: grow a geometric tree lazily and walk it by
    push/pop moves, then return to the root.  The result is tree-like by
    construction and its signature is the identity at every depth.

    The output has at most 2 * n_moves segments.
    """
    if n_moves < 0:
        raise ValueError("n_moves must be >= 0")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    children = {0: []}  # node -> list of child ids
    parent = {0: None}
    position = {0: np.zeros(dim)}
    node = 0
    verts = [position[0]]
    for _ in range(n_moves):
        at_root = parent[node] is None
        go_down = at_root or rng.random() < 0.55
        if go_down:
            if children[node] and rng.random() < 0.4:
                child = children[node][rng.integers(len(children[node]))]
            else:
                child = len(parent)
                edge = rng.normal(size=dim)
                edge *= rng.uniform(0.2, 1.0) / np.linalg.norm(edge)
                parent[child] = node
                children[child] = []
                children[node].append(child)
                position[child] = position[node] + edge
            node = child
        else:
            node = parent[node]
        verts.append(position[node])
    while parent[node] is not None:
        node = parent[node]
        verts.append(position[node])
    return PolyPath(np.array(verts))


def random_reduced_path(rng, n_segments, dim, min_step=0.3, max_step=1.0):
    """Random backtrack-free path from the origin.  Consecutive segments are
    re-drawn while collinear, so the path is its own reduced form."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    segs = []
    while len(segs) < n_segments:
        v = rng.normal(size=dim)
        norm = np.linalg.norm(v)
        if norm < 1e-9:
            continue
        v *= rng.uniform(min_step, max_step) / norm
        if segs and _collinearity(segs[-1], v)[0]:
            continue
        segs.append(v)
    return PolyPath.from_segments(np.zeros(dim), segs)


def insert_spurs(x, rng, n_spurs, scale=0.5):
    """Inflate a path with out-and-back spurs at random positions (possibly
    mid-segment, possibly nested inside earlier spurs).  The signature is
    unchanged and :func:`reduce` recovers the original normal form."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    verts = [np.asarray(v, dtype=np.float64) for v in x.vertices]
    for _ in range(n_spurs):
        if len(verts) == 1:
            base_idx = 0
            p = verts[0]
        else:
            seg = rng.integers(len(verts) - 1)
            t = rng.uniform()
            p = verts[seg] + t * (verts[seg + 1] - verts[seg])
            base_idx = seg
        s = rng.normal(size=x.dim)
        norm = np.linalg.norm(s)
        if norm < 1e-9:
            continue
        s *= rng.uniform(0.2, 1.0) * scale / norm
        verts[base_idx + 1 : base_idx + 1] = [p, p + s, p]
    return PolyPath(np.array(verts))
