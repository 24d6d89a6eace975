"""Tree-like paths, backtrack reduction, and loop erasure.

A path has the identity signature exactly when it is tree-like: it
retraces everything it does.  For piecewise-linear paths the reduced
form is computed by cancelling backtracks, and it is the canonical
representative of the path's signature.
"""

import numpy as np

from pathsig import (
    PolyPath,
    erase_loops,
    height_function,
    insert_spurs,
    is_tree_like,
    reduce,
    sample_tree_like,
    sig,
)
from pathsig.reduction import random_reduced_path
from pathsig.tensor_algebra import max_level_diff, unit

# a random walk on a random geometric tree is tree-like by construction
walk = sample_tree_like(seed=42, n_moves=12, dim=2)
print(f"tree walk with {walk.n_segments} segments")
print(f"  is_tree_like: {is_tree_like(walk)}")
print(f"  |sig - 1| at depth 5: {max_level_diff(sig(walk, 5), unit(2, 5)):.2e}")

h = height_function(walk)
print(f"  height function starts/ends at {h[0]}, {h[-1]}; peak {max(h):.3f}")

# hiding a path under spurs does not change its signature, and reduction
# digs the original back out
rng = np.random.default_rng(7)
w = random_reduced_path(rng, 5, 2)
noisy = insert_spurs(w, rng, 12)
recovered = reduce(noisy).inner
print(f"\nreduced word: {w.n_segments} segments, inflated to {noisy.n_segments}")
print(f"  signature unchanged: {max_level_diff(sig(noisy, 4), sig(w, 4)):.2e}")
print(f"  vertices recovered:  {np.abs(recovered.vertices - w.vertices).max():.2e}")

# loop erasure is the image-preserving (not signature-preserving) cousin
walk_values = ["a", "b", "c", "b", "d", "a", "e"]
erased = erase_loops(walk_values)
print(f"\nloop erasure of {walk_values}: {erased.points}")

square = PolyPath([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]])
print(f"\nthe unit square loop is tree-like: {is_tree_like(square)}")
g = sig(square, 2)
print(f"  its level-2 area: {0.5 * (g.coefficient((1, 2)) - g.coefficient((2, 1)))}")
