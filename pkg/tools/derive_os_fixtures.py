#!/usr/bin/env python3
"""Derive the ordered-shuffle permutation sets empirically and freeze them.

For every block profile (j_1,...,j_n) with j_1+...+j_n <= 6, the block
integral

    B = integral over t_1 < ... < t_n of dX^{j_1}(t_1) (x) ... (x) dX^{j_n}(t_n)

(X^j the degree-j prefix signature component of a random path) is a sum
of slot permutations of the degree-m signature level, m = sum(j).  The
candidates are the block-increasing permutations; the member subset is
recovered by least squares of the candidate images against B, computed by
an independent mesh recursion (exactly, via the signature level, when all
j_k = 1).  The base dimension is raised until the candidate images are
linearly independent, so the recovered 0/1 coefficient vector is unique;
if independence is never reached the profile is marked non-unique and the
set is validated by residual only.

Writes tests/fixtures/ordered_shuffles.json.  Run once; rerun only to
regenerate the fixtures.
"""

import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from pathsig.paths import PolyPath  # noqa: E402
from pathsig.signature import segment_exp_levels, sig  # noqa: E402
from pathsig.tensor_algebra import _product_levels, _unit_levels, permute_level  # noqa: E402

MAX_TOTAL = 6
MESH = 1024
N_PATHS = 3
COORD_CAP = 3000


def compositions(total):
    """All ordered compositions of 1..total into parts >= 1."""
    out = []
    for m in range(1, total + 1):
        for cuts in itertools.product((0, 1), repeat=m - 1):
            parts = []
            run = 1
            for c in cuts:
                if c:
                    parts.append(run)
                    run = 1
                else:
                    run += 1
            parts.append(run)
            out.append(tuple(parts))
    return out


def block_increasing_perms(blocks):
    m = sum(blocks)
    out = []
    for perm in itertools.permutations(range(m)):
        ok = True
        pos = 0
        for j in blocks:
            seg = perm[pos : pos + j]
            if list(seg) != sorted(seg):
                ok = False
                break
            pos += j
        if ok:
            out.append(perm)
    return out


def random_path(rng, dim, n_segments=4):
    steps = rng.uniform(-1.0, 1.0, size=(n_segments, dim))
    return PolyPath(np.vstack([np.zeros(dim), np.cumsum(steps, axis=0)]))


def prefix_level_samples(x, depth, mesh):
    """X^j at mesh+1 uniform parameter times, per level j <= depth.

    The grid is chosen so the path's vertices fall on grid points, making
    the sampled prefix signatures exact.
    """
    n = x.n_segments
    assert mesh % n == 0
    per = mesh // n
    acc = _unit_levels(x.dim, depth)
    samples = [[acc[j].copy()] for j in range(depth + 1)]
    for v in x.segment_vectors():
        step = segment_exp_levels(v / per, depth)
        for _ in range(per):
            acc = _product_levels(acc, step, x.dim, depth)
            for j in range(depth + 1):
                samples[j].append(acc[j])
    return [np.array(level) for level in samples]


def block_integral_mesh(x, blocks, mesh):
    """Mesh value of the block integral, via the factor recursion."""
    depth = max(blocks)
    samples = prefix_level_samples(x, depth, mesh)
    factors = [samples[j] for j in blocks]
    steps = factors[0].shape[0] - 1
    prev = np.ones((steps + 1, 1))
    for Y in factors[:-1]:
        dY = np.diff(Y, axis=0)
        contrib = (prev[:-1, :, None] * dY[:, None, :]).reshape(steps, -1)
        prev = np.vstack([np.zeros((1, contrib.shape[1])), np.cumsum(contrib, axis=0)])
    dY = np.diff(factors[-1], axis=0)
    return np.einsum("ta,tb->ab", prev[:-1], dY).reshape(-1)


def derive_profile(blocks, rng):
    m = sum(blocks)
    cands = block_increasing_perms(blocks)
    exact = all(j == 1 for j in blocks)
    dims = list(range(2, m + 1)) if m >= 2 else [2]
    fallback = None
    for n_paths in (N_PATHS, 12):
        for dim in dims:
            rows = []
            rhs = []
            for _ in range(n_paths):
                x = random_path(rng, dim)
                s = sig(x, m)
                level = s.levels[m]
                if exact:
                    b = np.asarray(level, dtype=np.float64)
                else:
                    b = block_integral_mesh(x, blocks, MESH)
                M = np.stack([permute_level(level, dim, p) for p in cands], axis=1)
                if M.shape[0] > COORD_CAP:
                    pick = rng.choice(M.shape[0], size=COORD_CAP, replace=False)
                    M = M[pick]
                    b = b[pick]
                rows.append(M)
                rhs.append(b)
            A = np.vstack(rows)
            y = np.concatenate(rhs)
            _, sv, vt = np.linalg.svd(A, full_matrices=False)
            corank = int((sv < sv[0] * 1e-10).sum())
            c, *_ = np.linalg.lstsq(A, y, rcond=None)
            rounded = np.round(c)
            margin = float(np.abs(c - rounded).max())
            residual = float(np.abs(A @ rounded - y).max())
            unique = corank == 0
            if not unique and corank == 1:
                # a single universal dependency: the 0/1 solution is still
                # unique unless shifting by the kernel vector lands on
                # another 0/1 vector
                unique = not _zero_one_shift_exists(rounded, vt[-1])
            valid = (
                margin < 0.1
                and residual < (1e-9 if exact else 50.0 / MESH)
                and set(np.unique(rounded)) <= {0.0, 1.0}
            )
            if unique and valid:
                members = [cands[k] for k in range(len(cands)) if rounded[k] == 1.0]
                return members, True, corank, dim, margin, residual
            if valid and fallback is None:
                members = [cands[k] for k in range(len(cands)) if rounded[k] == 1.0]
                fallback = (members, False, corank, dim, margin, residual)
    if fallback is not None:
        return fallback
    raise RuntimeError(f"could not recover a clean 0/1 set for profile {blocks}")


def _zero_one_shift_exists(c01, kernel_vec):
    """Is c01 + t * kernel_vec another 0/1 vector for some t != 0?"""
    for i in np.nonzero(np.abs(kernel_vec) > 1e-8)[0]:
        for target in (0.0, 1.0):
            t = (target - c01[i]) / kernel_vec[i]
            if abs(t) < 1e-9:
                continue
            shifted = c01 + t * kernel_vec
            if np.all(np.abs(shifted - np.round(shifted)) < 1e-6) and set(
                np.unique(np.round(shifted))
            ) <= {0.0, 1.0}:
                return True
    return False


def main():
    rng = np.random.default_rng(20240901)
    fixtures = {}
    for blocks in compositions(MAX_TOTAL):
        members, unique, corank, dim, margin, residual = derive_profile(blocks, rng)
        key = ",".join(str(j) for j in blocks)
        fixtures[key] = {
            "perms": [list(p) for p in sorted(members)],
            "unique": unique,
            "corank": corank,
            "dim_used": dim,
            "round_margin": margin,
            "residual": residual,
            "mesh": None if all(j == 1 for j in blocks) else MESH,
        }
        print(
            f"OS({key}): {len(members)} members, unique={unique}, corank={corank}, "
            f"d={dim}, margin={margin:.2e}, residual={residual:.2e}"
        )
    out = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    target = out / "ordered_shuffles.json"
    with open(target, "w") as fh:
        json.dump(fixtures, fh, indent=1, sort_keys=True)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
