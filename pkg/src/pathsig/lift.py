"""Signatures of the truncated-signature path over a graded alphabet.

The degree <= N part of a signature is a path in the graded space
W = R^d + (R^d)^(x2) + ... + (R^d)^(xN), of flat dimension
D = d + d^2 + ... + d^N.  Its own signature, truncated at level M, is
computed combinatorially: level n of the tensor algebra over W splits
into blocks indexed by multi-indices (i_1,...,i_n) in {1..N}^n, each block
living in (R^d)^(x(i_1+...+i_n)), and every block is a double sum of
interleavings of prefix signature levels with ordered-shuffle images of a
single signature level of the base path.

The ordered shuffles OS(j_1,...,j_n) are the linear extensions of the
partial order "increasing inside each block, block maxima increasing":
write m = j_1+...+j_n and split the slots 0..m-1 into consecutive blocks
of sizes j_1,...,j_n; a permutation belongs to OS iff its values increase
within every block and the values at the block-final slots increase from
block to block.  Each member contributes one simplex of the iterated
integral of the factor paths, so summing its slot permutations of the
degree-m signature level reproduces the block integral.  The realised
sets are frozen as test fixtures and validated against an independent
mesh oracle (see tests and tools/derive_os_fixtures.py).

A flattened W coordinate is laid out level-major: the d level-1
coordinates first, then the d^2 level-2 coordinates, and so on,
lexicographic within each level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .paths import PolyPath
from .signature import sig
from .tensor_algebra import (
    GroupElement,
    max_level_diff,
    permute_level,
)

__all__ = [
    "GradedSpace",
    "OrderedShuffleSet",
    "ordered_shuffles",
    "F_embed",
    "lift_signature",
    "lift_path_oracle",
    "signature_functoriality_check",
    "SIZE_GUARD",
]

SIZE_GUARD = 10**7


# ---------------------------------------------------------------------------
# graded index bookkeeping

@dataclass(frozen=True)
class GradedSpace:
    """Index maps for W = R^d + ... + (R^d)^(xN) flattened to R^D."""

    dim: int
    truncation: int

    @property
    def flat_dim(self):
        d, N = self.dim, self.truncation
        return sum(d**i for i in range(1, N + 1))

    def level_offset(self, level):
        if not 1 <= level <= self.truncation:
            raise ValueError(f"level {level} outside 1..{self.truncation}")
        return sum(self.dim**i for i in range(1, level))

    def flat_index(self, level, word_idx):
        return self.level_offset(level) + word_idx

    def level_of_flat(self, flat_idx):
        off = 0
        for level in range(1, self.truncation + 1):
            size = self.dim**level
            if flat_idx < off + size:
                return level, flat_idx - off
            off += size
        raise ValueError(f"flat index {flat_idx} outside 0..{self.flat_dim - 1}")

    def flatten_series(self, ts):
        """Concatenate levels 1..N of a tensor series into one R^D vector."""
        if ts.dim != self.dim or ts.depth < self.truncation:
            raise ValueError("series does not match the graded space")
        return np.concatenate([np.asarray(ts.levels[i], dtype=np.float64)
                               for i in range(1, self.truncation + 1)])

    def block_embed(self, level_arr, profile, block):
        """Add a block tensor into a flat level-n array over the W alphabet.

        ``profile`` is the multi-index (i_1,...,i_n); ``block`` is flat over
        the concatenated base words, of size d**(i_1+...+i_n).
        """
        d, D = self.dim, self.flat_dim
        n = len(profile)
        block = np.asarray(block, dtype=np.float64)
        shaped = block.reshape([d**i for i in profile])
        view = level_arr.reshape((D,) * n)
        slices = tuple(
            slice(self.level_offset(i), self.level_offset(i) + d**i) for i in profile
        )
        view[slices] += shaped

    def block_extract(self, level_arr, profile):
        """Read a block of a flat level-n array over the W alphabet."""
        d, D = self.dim, self.flat_dim
        n = len(profile)
        view = np.asarray(level_arr, dtype=np.float64).reshape((D,) * n)
        slices = tuple(
            slice(self.level_offset(i), self.level_offset(i) + d**i) for i in profile
        )
        return view[slices].reshape(-1).copy()

    def profiles(self, n):
        """All block multi-indices of level n, in storage order."""
        return list(itertools.product(range(1, self.truncation + 1), repeat=n))


# ---------------------------------------------------------------------------
# ordered shuffles

@dataclass(frozen=True)
class OrderedShuffleSet:
    """The permutations OS(j_1,...,j_n), 0-based, in one-line slot->rank
    notation (output slot q receives the factor of rank perms[k][q])."""

    blocks: tuple
    perms: tuple

    def __len__(self):
        return len(self.perms)

    def __iter__(self):
        return iter(self.perms)


@lru_cache(maxsize=None)
def _ordered_shuffle_perms(blocks):
    m = sum(blocks)
    slots = []
    pos = 0
    for j in blocks:
        slots.append(list(range(pos, pos + j)))
        pos += j
    out = []
    for parts in _rank_partitions(tuple(range(m)), blocks):
        if all(max(a) < max(b) for a, b in zip(parts, parts[1:])):
            perm = [0] * m
            for block_slots, ranks in zip(slots, parts):
                for s, r in zip(block_slots, sorted(ranks)):
                    perm[s] = r
            out.append(tuple(perm))
    return tuple(sorted(out))


def _rank_partitions(ranks, blocks):
    """Split the given ranks into labelled subsets of the given sizes."""
    if len(blocks) == 1:
        yield (ranks,)
        return
    first = blocks[0]
    rest = blocks[1:]
    for chosen in itertools.combinations(ranks, first):
        remaining = tuple(r for r in ranks if r not in chosen)
        for tail in _rank_partitions(remaining, rest):
            yield (chosen,) + tail


def ordered_shuffles(*blocks):
    """OS(j_1,...,j_n): the permutations in the block expansion of the
    signature of the signature path.  Cached per block profile."""
    if len(blocks) == 1 and isinstance(blocks[0], (tuple, list)):
        blocks = tuple(blocks[0])
    blocks = tuple(int(j) for j in blocks)
    if not blocks or any(j < 1 for j in blocks):
        raise ValueError(f"block sizes must be >= 1, got {blocks}")
    return OrderedShuffleSet(blocks, _ordered_shuffle_perms(blocks))


# ---------------------------------------------------------------------------
# prefix interleaving

def F_embed(prefixes, body, dim, body_blocks):
    """Interleave prefix tensors before body blocks.

    ``prefixes`` is one flat tensor per block (degree may be 0: a scalar
    array [c]); ``body`` is a flat tensor of degree sum(body_blocks).  The
    factors of the result are ordered prefix_1, body block 1, prefix_2,
    body block 2, ...
    """
    if len(prefixes) != len(body_blocks):
        raise ValueError("one prefix tensor per body block required")
    prefix_degs = []
    for pv in prefixes:
        size = np.asarray(pv).size
        deg = 0
        while dim**deg < size:
            deg += 1
        if dim**deg != size:
            raise ValueError(f"prefix of size {size} is not a power of dim {dim}")
        prefix_degs.append(deg)
    body = np.asarray(body, dtype=np.float64)
    m = sum(body_blocks)
    if body.size != dim**m:
        raise ValueError(
            f"body has size {body.size}, expected dim**{m} for blocks {body_blocks}"
        )

    out = np.ones(1)
    for pv in prefixes:
        out = np.outer(out, np.asarray(pv, dtype=np.float64)).ravel()
    out = np.outer(out, body).ravel()

    total = sum(prefix_degs) + m
    if total == 0:
        return out
    shaped = out.reshape((dim,) * total)
    # axes currently: prefix_1 .. prefix_n, body_1 .. body_n (grouped)
    axes = []
    p_pos = np.cumsum([0] + prefix_degs)
    b_pos = np.cumsum([0] + list(body_blocks)) + sum(prefix_degs)
    for k in range(len(body_blocks)):
        axes.extend(range(p_pos[k], p_pos[k + 1]))
        axes.extend(range(b_pos[k], b_pos[k + 1]))
    return shaped.transpose(axes).reshape(-1)


# ---------------------------------------------------------------------------
# the lift

def _check_size_guard(D, M):
    budget = D**M
    if budget > SIZE_GUARD:
        raise ValueError(
            f"graded computation needs {budget} coefficients "
            f"(flat dim {D} at level {M}); the guard allows {SIZE_GUARD}"
        )


def lift_signature(x, N, M, start=0, stop=None):
    """Level-M signature, over the graded alphabet, of the degree<=N
    signature path of x (restricted to the vertex range [start, stop]).

    Block (i_1,...,i_n) of level n is the double sum over inner profiles
    (j_1,...,j_n), 1 <= j_k <= i_k, of the interleaving of the prefix
    levels X^{i_k - j_k} over [0, start] with the ordered-shuffle sum of
    the level j_1+...+j_n signature of x over [start, stop].  Level 1
    equals the increment of the truncated-signature path.
    """
    if N < 1 or M < 1:
        raise ValueError("N and M must be >= 1")
    gs = GradedSpace(x.dim, N)
    D = gs.flat_dim
    _check_size_guard(D, M)
    if stop is None:
        stop = x.n_vertices - 1
    if not 0 <= start <= stop <= x.n_vertices - 1:
        raise ValueError(f"bad vertex range [{start}, {stop}]")

    full_depth = N * M
    prefix_sig = sig(x.prefix(start), full_depth) if start > 0 else None
    body_path = PolyPath(x.vertices[start : stop + 1])
    body_sig = sig(body_path, full_depth)

    levels = [np.zeros(D**n) for n in range(M + 1)]
    levels[0][0] = 1.0
    d = x.dim
    for n in range(1, M + 1):
        level = levels[n]
        for j_profile in itertools.product(range(1, N + 1), repeat=n):
            m = sum(j_profile)
            body = np.zeros(d**m)
            for perm in ordered_shuffles(j_profile):
                body += permute_level(body_sig.levels[m], d, perm)
            for i_profile in itertools.product(
                *[range(j, N + 1) for j in j_profile]
            ):
                prefixes = []
                for i, j in zip(i_profile, j_profile):
                    deg = i - j
                    if prefix_sig is None:
                        pv = np.ones(1) if deg == 0 else np.zeros(d**deg)
                    else:
                        pv = prefix_sig.levels[deg]
                    prefixes.append(pv)
                if any(np.asarray(pv).size and not np.any(pv) for pv in prefixes):
                    continue
                block = F_embed(prefixes, body, d, j_profile)
                gs.block_embed(level, i_profile, block)
    return GroupElement(D, M, levels)


def lift_path_oracle(x, N, mesh):
    """Mesh oracle: sample the truncated-signature path at ``mesh`` uniform
    parameter steps, flatten to R^D, and return the interpolating polyline.
    The signature of this polyline converges (first order in the mesh) to
    :func:`lift_signature`."""
    if mesh < 2:
        raise ValueError("mesh must be >= 2")
    gs = GradedSpace(x.dim, N)
    times = x.natural_times()
    grid = np.linspace(times[0], times[-1], mesh + 1)
    # exact prefix signatures at the grid times: step through the merged
    # breakpoints so vertex crossings are handled exactly
    current = sig(PolyPath(x.vertices[:1]), N)
    flat_samples = [gs.flatten_series(current)]
    prev_t = grid[0]
    for t in grid[1:]:
        a = x.point_at(prev_t)
        inner = [x.vertices[k] for k in range(x.n_vertices) if prev_t < times[k] < t]
        pts = [a] + inner + [x.point_at(t)]
        piece = sig(PolyPath(np.array(pts)), N)
        current = current @ piece
        flat_samples.append(gs.flatten_series(current))
        prev_t = t
    return PolyPath(np.array(flat_samples), grid if len(set(grid)) == len(grid) else None)


def signature_functoriality_check(x, y, N, M, tol=1e-8):
    """True iff the graded lifts of two equal-signature paths agree within
    tol.  Raises when the signatures differ through depth N*M (the check
    is inapplicable then)."""
    depth = N * M
    sx = sig(x, depth)
    sy = sig(y, depth)
    if max_level_diff(sx, sy) > max(tol, 1e-10):
        raise ValueError(
            f"paths do not share a signature through depth {depth}; "
            "the functoriality check is inapplicable"
        )
    lx = lift_signature(x, N, M)
    ly = lift_signature(y, N, M)
    return max_level_diff(lx, ly) <= tol
