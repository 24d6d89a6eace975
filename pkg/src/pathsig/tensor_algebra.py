"""Truncated free tensor algebra over R^d with dense per-level storage.

A :class:`TensorSeries` keeps one flat coefficient array per tensor degree
0..depth.  Words over the alphabet {1..d} are plain tuples of ints; the
coefficient of a word (w1,...,wn) sits at position
sum((w_k - 1) * d**(n-1-k)) of ``levels[n]`` (lexicographic order), so
concatenation of words corresponds to ``np.outer(...).ravel()``.

Level norms are l1 in the word basis throughout.  l1 is the projective
norm for the l1 norm on R^d, so it is submultiplicative
(``|u (x) v| <= |u| |v|``, with equality for nonnegative coefficients) and
invariant under permutations of tensor slots.

All values are immutable after construction (arrays are locked read-only)
and every operation is a pure function, so concurrent use on shared
inputs is safe.

Coefficient arrays are float64 by default.  Arrays of dtype ``object``
(e.g. ``fractions.Fraction`` entries) are accepted and carried through the
ring operations exactly; norms and metrics that need real powers remain
float-only.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "TensorSeries",
    "GroupElement",
    "LieSeries",
    "WordSum",
    "unit",
    "zeros",
    "level1_series",
    "basis_vector",
    "word_index",
    "word_at",
    "tensor_mul",
    "tensor_exp",
    "tensor_log",
    "group_inverse",
    "shuffle",
    "word_sum_shuffle",
    "evaluate",
    "is_group_like",
    "is_lie",
    "dynkin_map",
    "permute_level",
    "level_norm",
    "level_norms",
    "l1_level_diffs",
    "max_level_diff",
    "dilation_norm",
    "group_distance",
    "to_json_obj",
    "from_json_obj",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9


# ---------------------------------------------------------------------------
# words

def word_index(word, dim):
    """Position of `word` inside the flat array of its level."""
    idx = 0
    for letter in word:
        if not 1 <= letter <= dim:
            raise ValueError(f"letter {letter} outside alphabet 1..{dim}")
        idx = idx * dim + (letter - 1)
    return idx


def word_at(index, length, dim):
    """Inverse of :func:`word_index` for words of the given length."""
    letters = [0] * length
    for pos in range(length - 1, -1, -1):
        index, r = divmod(index, dim)
        letters[pos] = r + 1
    return tuple(letters)


def words_of_length(length, dim):
    """All words of a given length, in lexicographic (storage) order."""
    return [word_at(i, length, dim) for i in range(dim**length)]


# ---------------------------------------------------------------------------
# series containers

def _as_level(arr, size):
    a = np.asarray(arr)
    if a.dtype != object:
        a = a.astype(np.float64, copy=True)
    else:
        a = a.copy()
    a = a.reshape(-1)
    if a.shape[0] != size:
        raise ValueError(f"level has {a.shape[0]} coefficients, expected {size}")
    a.setflags(write=False)
    return a


class TensorSeries:
    """Element of the depth-N truncated tensor algebra over R^dim."""

    __slots__ = ("dim", "depth", "levels")

    def __init__(self, dim, depth, levels):
        dim = int(dim)
        depth = int(depth)
        if dim < 1:
            raise ValueError("dim must be >= 1")
        if depth < 0:
            raise ValueError("depth must be >= 0")
        levels = list(levels)
        if len(levels) != depth + 1:
            raise ValueError(f"expected {depth + 1} levels, got {len(levels)}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(
            self, "levels", tuple(_as_level(lv, dim**n) for n, lv in enumerate(levels))
        )

    def __setattr__(self, name, value):
        raise AttributeError("TensorSeries is immutable")

    # -- accessors ---------------------------------------------------------

    def level(self, n):
        return self.levels[n]

    @property
    def scalar(self):
        return self.levels[0][0]

    def coefficient(self, word):
        word = tuple(word)
        n = len(word)
        if n > self.depth:
            raise ValueError(f"word {word} longer than depth {self.depth}")
        return self.levels[n][word_index(word, self.dim)]

    def is_exact(self):
        return any(lv.dtype == object for lv in self.levels)

    # -- ring structure ----------------------------------------------------

    def __add__(self, other):
        _check_same_space(self, other)
        return TensorSeries(
            self.dim, self.depth, [a + b for a, b in zip(self.levels, other.levels)]
        )

    def __sub__(self, other):
        _check_same_space(self, other)
        return TensorSeries(
            self.dim, self.depth, [a - b for a, b in zip(self.levels, other.levels)]
        )

    def __neg__(self):
        return TensorSeries(self.dim, self.depth, [-a for a in self.levels])

    def __mul__(self, scale):
        if not isinstance(scale, (int, float, Fraction, np.floating, np.integer)):
            return NotImplemented
        return TensorSeries(self.dim, self.depth, [a * scale for a in self.levels])

    __rmul__ = __mul__

    def __matmul__(self, other):
        return tensor_mul(self, other)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, depth={self.depth})"


class GroupElement(TensorSeries):
    """Tensor series with scalar part 1; truncated signatures live here.

    The defining property (the shuffle identity
    ``<u sh w, g> = <u, g> <w, g>``) is expensive to enforce eagerly, so the
    constructor only checks the scalar part; use :func:`is_group_like` to
    verify the full invariant.
    """

    def __init__(self, dim, depth, levels):
        super().__init__(dim, depth, levels)
        s = self.levels[0][0]
        exact = self.levels[0].dtype == object
        if (s != 1) if exact else abs(float(s) - 1.0) > 1e-12:
            raise ValueError(f"group element must have scalar part 1, got {s}")


class LieSeries(TensorSeries):
    """Tensor series with scalar part 0 whose levels lie in the free Lie
    subspaces; log-signatures live here.  Only the scalar part is checked at
    construction; use :func:`is_lie` for the full membership test."""

    def __init__(self, dim, depth, levels):
        super().__init__(dim, depth, levels)
        s = self.levels[0][0]
        exact = self.levels[0].dtype == object
        if (s != 0) if exact else abs(float(s)) > 1e-12:
            raise ValueError(f"Lie series must have scalar part 0, got {s}")


def _check_same_space(a, b):
    if a.dim != b.dim or a.depth != b.depth:
        raise ValueError(
            f"incompatible operands: dim/depth ({a.dim},{a.depth}) vs ({b.dim},{b.depth})"
        )


def zeros(dim, depth):
    return TensorSeries(dim, depth, [np.zeros(dim**n) for n in range(depth + 1)])


def unit(dim, depth):
    """The identity element: scalar 1, higher levels 0."""
    levels = [np.zeros(dim**n) for n in range(depth + 1)]
    levels[0][0] = 1.0
    return GroupElement(dim, depth, levels)


def basis_vector(dim, letter):
    v = np.zeros(dim)
    v[letter - 1] = 1.0
    return v


def level1_series(v, depth):
    """Series with the given level-1 part and all other levels zero."""
    v = np.asarray(v)
    dim = v.shape[0]
    levels = [np.zeros(dim**n) for n in range(depth + 1)]
    levels[1] = v
    return TensorSeries(dim, depth, levels)


# ---------------------------------------------------------------------------
# products, exp, log, inverse

def _zero_level(size, exact):
    if exact:
        return np.full(size, Fraction(0), dtype=object)
    return np.zeros(size)


def _unit_levels(dim, depth, exact=False):
    levels = [_zero_level(dim**n, exact) for n in range(depth + 1)]
    levels[0][0] = Fraction(1) if exact else 1.0
    return levels


def _product_levels(la, lb, dim, depth):
    out = []
    for n in range(depth + 1):
        acc = np.outer(la[0], lb[n]).ravel()
        for k in range(1, n + 1):
            acc = acc + np.outer(la[k], lb[n - k]).ravel()
        out.append(acc)
    return out


def tensor_mul(a, b):
    """Truncated tensor product; terms beyond the common depth are dropped."""
    _check_same_space(a, b)
    levels = _product_levels(a.levels, b.levels, a.dim, a.depth)
    if isinstance(a, GroupElement) and isinstance(b, GroupElement):
        return GroupElement(a.dim, a.depth, levels)
    return TensorSeries(a.dim, a.depth, levels)


def _reciprocal(k, exact):
    return Fraction(1, k) if exact else 1.0 / k


def tensor_exp(a):
    """exp of a series with zero scalar part: sum_k a^k / k! truncated."""
    s = a.scalar
    if (s != 0) if a.is_exact() else abs(float(s)) > 1e-12:
        raise ValueError(f"tensor_exp requires zero scalar part, got {s}")
    exact = a.is_exact()
    acc = _unit_levels(a.dim, a.depth, exact)
    term = _unit_levels(a.dim, a.depth, exact)
    for k in range(1, a.depth + 1):
        term = _product_levels(term, a.levels, a.dim, a.depth)
        r = _reciprocal(k, exact)
        term = [lv * r for lv in term]
        acc = [x + y for x, y in zip(acc, term)]
    return GroupElement(a.dim, a.depth, acc)


def tensor_log(g):
    """log of a series with scalar part 1; inverse of :func:`tensor_exp`."""
    s = g.scalar
    exact = g.is_exact()
    if (s != 1) if exact else abs(float(s) - 1.0) > 1e-12:
        raise ValueError(f"tensor_log requires scalar part 1, got {s}")
    u = [lv.copy() for lv in g.levels]
    u[0] = _zero_level(1, exact)
    acc = [_zero_level(g.dim**n, exact) for n in range(g.depth + 1)]
    term = _unit_levels(g.dim, g.depth, exact)
    for k in range(1, g.depth + 1):
        term = _product_levels(term, u, g.dim, g.depth)
        coeff = _reciprocal(k, exact)
        if k % 2 == 0:
            coeff = -coeff
        acc = [x + lv * coeff for x, lv in zip(acc, term)]
    return TensorSeries(g.dim, g.depth, acc)


def group_inverse(g):
    """Inverse of a scalar-part-1 series: the geometric series in (g - 1)."""
    s = g.scalar
    exact = g.is_exact()
    if (s != 1) if exact else abs(float(s) - 1.0) > 1e-12:
        raise ValueError(f"group_inverse requires scalar part 1, got {s}")
    u = [lv.copy() for lv in g.levels]
    u[0] = _zero_level(1, exact)
    acc = _unit_levels(g.dim, g.depth, exact)
    term = _unit_levels(g.dim, g.depth, exact)
    for k in range(1, g.depth + 1):
        term = _product_levels(term, u, g.dim, g.depth)
        sign = 1 if k % 2 == 0 else -1
        acc = [x + lv * sign for x, lv in zip(acc, term)]
    if isinstance(g, GroupElement):
        return GroupElement(g.dim, g.depth, acc)
    return TensorSeries(g.dim, g.depth, acc)


# ---------------------------------------------------------------------------
# shuffle algebra on words

@lru_cache(maxsize=None)
def _shuffle_items(u, w):
    if not u:
        return ((w, 1),)
    if not w:
        return ((u, 1),)
    out = {}
    for word, c in _shuffle_items(u[1:], w):
        key = (u[0],) + word
        out[key] = out.get(key, 0) + c
    for word, c in _shuffle_items(u, w[1:]):
        key = (w[0],) + word
        out[key] = out.get(key, 0) + c
    return tuple(sorted(out.items()))


class WordSum:
    """Finite linear combination of words (a functional on tensor series)."""

    __slots__ = ("_data",)

    def __init__(self, data=()):
        cleaned = {}
        for word, c in dict(data).items():
            if c != 0:
                cleaned[tuple(word)] = cleaned.get(tuple(word), 0) + c
        self._data = {w: c for w, c in cleaned.items() if c != 0}

    def items(self):
        return self._data.items()

    def words(self):
        return self._data.keys()

    def coefficient(self, word):
        return self._data.get(tuple(word), 0)

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        return isinstance(other, WordSum) and self._data == other._data

    def __add__(self, other):
        data = dict(self._data)
        for w, c in other.items():
            data[w] = data.get(w, 0) + c
        return WordSum(data)

    def __mul__(self, scale):
        if isinstance(scale, WordSum):
            return word_sum_shuffle(self, scale)
        return WordSum({w: c * scale for w, c in self._data.items()})

    __rmul__ = __mul__

    def append_letter(self, letter):
        """Concatenate one letter to the right of every word."""
        return WordSum({w + (letter,): c for w, c in self._data.items()})

    def max_length(self):
        return max((len(w) for w in self._data), default=0)

    def __repr__(self):
        terms = " + ".join(f"{c}*{w}" for w, c in sorted(self._data.items()))
        return f"WordSum({terms or '0'})"


def shuffle(u, w):
    """Shuffle product of two words: all order-preserving interleavings,
    with multiplicity."""
    return WordSum(dict(_shuffle_items(tuple(u), tuple(w))))


def word_sum_shuffle(f, g):
    """Bilinear extension of the shuffle product to word sums."""
    data = {}
    for u, cu in f.items():
        for w, cw in g.items():
            for word, m in _shuffle_items(u, w):
                data[word] = data.get(word, 0) + cu * cw * m
    return WordSum(data)


def evaluate(g, f):
    """Pairing <f, g> of a word sum with a tensor series."""
    if f.max_length() > g.depth:
        raise ValueError(
            f"word sum involves words of length {f.max_length()}, "
            f"but series depth is {g.depth}"
        )
    total = 0
    for word, c in f.items():
        total = total + c * g.coefficient(word)
    return total


# ---------------------------------------------------------------------------
# structural predicates

def is_group_like(g, tol=DEFAULT_TOL):
    """Shuffle-identity test: <u sh w, g> == <u, g><w, g> for every pair of
    nonempty words with combined length <= depth."""
    s = g.scalar
    if abs(float(s) - 1.0) > max(tol, 1e-12):
        raise ValueError(f"group-likeness requires scalar part 1, got {s}")
    d = g.dim
    for total in range(2, g.depth + 1):
        for lu in range(1, total // 2 + 1):
            lw = total - lu
            for u in words_of_length(lu, d):
                for w in words_of_length(lw, d):
                    if lu == lw and w < u:
                        continue
                    lhs = evaluate(g, shuffle(u, w))
                    rhs = g.coefficient(u) * g.coefficient(w)
                    if abs(float(lhs - rhs)) > tol:
                        return False
    return True


def _dynkin_nd(x, k):
    # right-bracketing on the first k axes: rho(u (x) a) = rho(u) (x) a - a (x) rho(u)
    if k <= 1:
        return x
    y = _dynkin_nd(x, k - 1)
    return y - np.moveaxis(y, k - 1, 0)


def dynkin_map(level_arr, dim, n):
    """Apply the bracketing map w1...wn -> [[...[w1,w2],...],wn] linearly.

    A degree-n tensor is a Lie element exactly when this map fixes it after
    division by n.
    """
    if n <= 1:
        return np.asarray(level_arr).copy()
    x = np.asarray(level_arr).reshape((dim,) * n)
    return _dynkin_nd(x, n).ravel()


def is_lie(a, tol=DEFAULT_TOL):
    """True iff each level is fixed by the degree-n bracketing map over n."""
    s = a.scalar
    if abs(float(s)) > max(tol, 1e-12):
        raise ValueError(f"Lie test requires zero scalar part, got {s}")
    for n in range(1, a.depth + 1):
        x = a.levels[n].astype(np.float64) if a.levels[n].dtype == object else a.levels[n]
        resid = dynkin_map(x, a.dim, n) / n - x
        if np.abs(resid).sum() > tol * max(1.0, np.abs(x).sum()):
            return False
    return True


# ---------------------------------------------------------------------------
# slot permutations (used by the norm invariance and by the graded lift)

def permute_level(arr, dim, perm):
    """Permute tensor slots of a flat degree-n coefficient array.

    ``perm`` is 0-based in one-line notation: output slot q receives input
    factor perm[q], i.e. the result of v_0 (x) ... (x) v_{n-1} is
    v_{perm[0]} (x) ... (x) v_{perm[n-1]}.  On coefficients this reads
    result[u] = arr[u composed with perm^-1], which is exactly
    ``transpose(perm)`` on the reshaped array.
    """
    n = len(perm)
    a = np.asarray(arr)
    if n <= 1:
        return a.copy()
    return a.reshape((dim,) * n).transpose(perm).reshape(-1)


# ---------------------------------------------------------------------------
# norms and the group metric

def level_norm(arr):
    """l1 norm of a level's coefficients."""
    a = np.asarray(arr)
    if a.dtype == object:
        return sum(abs(c) for c in a.reshape(-1))
    return float(np.abs(a).sum())


def level_norms(ts):
    return [level_norm(lv) for lv in ts.levels]


def l1_level_diffs(a, b):
    _check_same_space(a, b)
    return [level_norm(x - y) for x, y in zip(a.levels, b.levels)]


def max_level_diff(a, b):
    return max(l1_level_diffs(a, b))


def dilation_norm(a):
    """max over degrees n >= 1 of |level n|^(1/n); finite radius gauge."""
    best = 0.0
    for n in range(1, a.depth + 1):
        nn = float(level_norm(a.levels[n]))
        if nn > 0.0:
            best = max(best, nn ** (1.0 / n))
    return best


def group_distance(a, b):
    """max_n |level_n(a^-1 b)|^(1/n); the homogeneous metric on group
    elements of a common dim/depth."""
    _check_same_space(a, b)
    return dilation_norm(tensor_mul(group_inverse(a), b))


# ---------------------------------------------------------------------------
# JSON round trip

def to_json_obj(ts):
    """Plain-object form: {"dim": d, "depth": N, "levels": [[...], ...]}."""
    return {
        "dim": ts.dim,
        "depth": ts.depth,
        "levels": [[float(c) for c in lv] for lv in ts.levels],
    }


def from_json_obj(obj):
    return TensorSeries(obj["dim"], obj["depth"], obj["levels"])


def to_json(ts):
    return json.dumps(to_json_obj(ts))


def from_json(text):
    return from_json_obj(json.loads(text))
