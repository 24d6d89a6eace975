"""Independent reference computations used to pin expected test values.

Everything here is deliberately naive: left-Riemann quadrature on fine
meshes, exhaustive enumeration, exponential-time subset searches.  These
routines never call the code paths they are used to check (the graded
block oracle samples exact prefix signatures, which are validated
separately against quadrature).
"""

import itertools
import math
from collections import Counter

import numpy as np


# ---------------------------------------------------------------------------
# iterated integrals by quadrature

def sample_polyline(vertices, mesh):
    """mesh+1 uniform parameter samples of the polyline through vertices."""
    vertices = np.asarray(vertices, dtype=np.float64)
    n = vertices.shape[0]
    if n == 1:
        return np.repeat(vertices, mesh + 1, axis=0)
    params = np.linspace(0.0, 1.0, mesh + 1)
    knots = np.linspace(0.0, 1.0, n)
    out = np.empty((mesh + 1, vertices.shape[1]))
    for c in range(vertices.shape[1]):
        out[:, c] = np.interp(params, knots, vertices[:, c])
    return out


def iterated_integral_riemann(vertices, word, mesh):
    """Left-Riemann value of the iterated integral of dx^{w1}...dx^{wn}
    over the order simplex, on the polyline through the vertices."""
    pts = sample_polyline(vertices, mesh)
    inc = np.diff(pts, axis=0)
    vals = np.ones(mesh + 1)
    for letter in word:
        contrib = vals[:-1] * inc[:, letter - 1]
        vals = np.concatenate([[0.0], np.cumsum(contrib)])
    return float(vals[-1])


def iterated_integral_of_factors(factors):
    """Left-Riemann n-fold iterated integral of factor paths over a shared
    grid: integral over t_1 < ... < t_n of dY_1(t_1) (x) ... (x) dY_n(t_n).

    Each factor is an array (T+1, size_k); the result is flat of size
    prod(size_k).
    """
    factors = [np.asarray(Y, dtype=np.float64) for Y in factors]
    steps = factors[0].shape[0] - 1
    prev = np.ones((steps + 1, 1))
    for Y in factors[:-1]:
        dY = np.diff(Y, axis=0)
        contrib = (prev[:-1, :, None] * dY[:, None, :]).reshape(steps, -1)
        prev = np.vstack([np.zeros((1, contrib.shape[1])), np.cumsum(contrib, axis=0)])
    dY = np.diff(factors[-1], axis=0)
    return np.einsum("ta,tb->ab", prev[:-1], dY).reshape(-1)


# ---------------------------------------------------------------------------
# shuffles by exhaustive interleaving

def shuffle_enumerate(u, w):
    """Counter over all order-preserving interleavings of two words."""
    u, w = tuple(u), tuple(w)
    out = Counter()

    def go(a, b, acc):
        if not a and not b:
            out[acc] += 1
            return
        if a:
            go(a[1:], b, acc + (a[0],))
        if b:
            go(a, b[1:], acc + (b[0],))

    go(u, w, ())
    return out


# ---------------------------------------------------------------------------
# p-variation by exhaustive partition enumeration

def p_var_exhaustive(points, p, dist):
    """Maximum of sum dist^p over all subsequences containing both ends."""
    n = len(points)
    if n <= 1:
        return 0.0
    best = 0.0
    interior = list(range(1, n - 1))
    for r in range(len(interior) + 1):
        for combo in itertools.combinations(interior, r):
            seq = [0, *combo, n - 1]
            total = sum(
                dist(points[a], points[b]) ** p for a, b in zip(seq, seq[1:])
            )
            best = max(best, total)
    return best


# ---------------------------------------------------------------------------
# randomized-order backtrack cancellation (confluence oracle)

def _collinear(a, b, rtol=1e-12):
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return True, False
    cross = float(np.abs(np.outer(a, b) - np.outer(b, a)).max())
    if cross > rtol * na * nb:
        return False, False
    return True, bool(np.dot(a, b) > 0)


def reduce_random_order(vertices, rng, rtol=1e-12):
    """Apply zero-drops, merges, and backtrack cancellations one at a time
    in random order until none applies; returns the final vertex array."""
    verts = [np.asarray(v, dtype=np.float64) for v in vertices]
    scale = max(1.0, max(float(np.abs(v).max()) for v in verts))
    while True:
        ops = []
        for i in range(len(verts) - 1):
            if float(np.abs(verts[i + 1] - verts[i]).max()) <= rtol * scale:
                ops.append(("drop", i))
        for i in range(len(verts) - 2):
            a = verts[i + 1] - verts[i]
            b = verts[i + 2] - verts[i + 1]
            if float(np.abs(a).max()) <= rtol * scale or float(np.abs(b).max()) <= rtol * scale:
                continue
            col, same = _collinear(a, b, rtol)
            if col and same:
                ops.append(("merge", i))
            elif col:
                ops.append(("cancel", i))
        if not ops:
            return np.array(verts)
        _op, i = ops[rng.integers(len(ops))]
        # dropping, merging, and cancelling all remove one interior point;
        # an exact backtrack leaves a zero segment that a later drop removes
        del verts[i + 1]


# ---------------------------------------------------------------------------
# scalar-path monomial integrals (exact, for d = 1 checks)

def monomial_simplex_integral(profile, upper):
    """Exact integral over 0 < u_1 < ... < u_n < upper of
    prod u_k^(j_k - 1) / (j_k - 1)! du, via Fraction polynomial recursion."""
    from fractions import Fraction

    poly = {0: Fraction(1)}  # polynomial in the current upper limit
    for j in profile:
        scaled = {}
        for power, coef in poly.items():
            q = power + j - 1
            scaled[q + 1] = coef / math.factorial(j - 1) / (q + 1)
        poly = scaled
    return float(sum(coef * Fraction(upper) ** power for power, coef in poly.items()))
