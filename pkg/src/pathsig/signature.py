"""Exact truncated signatures of piecewise-linear paths.

Each linear segment contributes exp(increment); the signature of the whole
path is the left-to-right product of the segment exponentials, which
multiplies correctly under concatenation.  No quadrature is involved: the
result is the iterated-integral signature of the path, exactly (up to
float rounding).
"""

from __future__ import annotations

import numpy as np

from .paths import GroupPath, PolyPath
from .tensor_algebra import (
    GroupElement,
    LieSeries,
    TensorSeries,
    _product_levels,
    _unit_levels,
    level_norm,
    tensor_log,
)

__all__ = ["sig", "logsig", "sig_prefix_path", "distinguishing_level", "segment_exp_levels"]


def segment_exp_levels(v, depth):
    """Levels of exp of a single level-1 increment: level n is v^(x n)/n!."""
    v = np.asarray(v)
    exact = v.dtype == object
    levels = _unit_levels(v.shape[0], depth, exact)
    if depth >= 1:
        levels[1] = v.copy()
    for n in range(2, depth + 1):
        levels[n] = np.outer(levels[n - 1], v).ravel() / n
    return levels


def _sig_levels(x, depth):
    exact = x.is_exact()
    acc = _unit_levels(x.dim, depth, exact)
    for v in x.segment_vectors():
        acc = _product_levels(acc, segment_exp_levels(v, depth), x.dim, depth)
    return acc


def sig(x, depth):
    """Truncated signature of a piecewise-linear path.

    A constant (or single-vertex) path maps to the identity element.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return GroupElement(x.dim, depth, _sig_levels(x, depth))


def logsig(x, depth):
    """Log-signature; its levels lie in the free Lie subspaces."""
    return LieSeries(x.dim, depth, tensor_log(sig(x, depth)).levels)


def sig_prefix_path(x, depth):
    """Group path t_k -> sig(x restricted to [t_0, t_k]); starts at the
    identity and has exp(segment increment) as consecutive increments."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    exact = x.is_exact()
    acc = _unit_levels(x.dim, depth, exact)
    samples = [GroupElement(x.dim, depth, acc)]
    for v in x.segment_vectors():
        acc = _product_levels(acc, segment_exp_levels(v, depth), x.dim, depth)
        samples.append(GroupElement(x.dim, depth, acc))
    return GroupPath(samples, x.natural_times())


def distinguishing_level(g, h, tol=1e-9):
    """Smallest degree at which two series differ, or None if they agree
    through the common depth.  The comparison is relative to the level
    norms: a level counts as different when the l1 gap exceeds
    tol * max(1, |level(g)|, |level(h)|)."""
    if g.dim != h.dim or g.depth != h.depth:
        raise ValueError("operands must share dim and depth")
    for n in range(1, g.depth + 1):
        gap = level_norm(g.levels[n] - h.levels[n])
        scale = max(1.0, float(level_norm(g.levels[n])), float(level_norm(h.levels[n])))
        if float(gap) > tol * scale:
            return n
    return None
