"""Signatures of piecewise-linear paths and the structures built on them:
the truncated tensor algebra and shuffle algebra, tree-like reduction,
polynomial 1-form functionals, the graded lift of the signature path, and
the tree metric on reduced paths."""

from .tensor_algebra import (
    TensorSeries,
    GroupElement,
    LieSeries,
    WordSum,
    unit,
    zeros,
    tensor_mul,
    tensor_exp,
    tensor_log,
    group_inverse,
    shuffle,
    evaluate,
    is_group_like,
    is_lie,
    dilation_norm,
    group_distance,
)
from .paths import PolyPath, GroupPath, concat, reverse, p_variation, pvar_distance
from .signature import sig, logsig, sig_prefix_path, distinguishing_level
from .reduction import (
    ReducedPath,
    normalize,
    reduce,
    is_tree_like,
    erase_loops,
    height_function,
    sample_tree_like,
    insert_spurs,
)
from .functionals import (
    Polynomial1Form,
    form_to_functional,
    integrate_numeric,
    invariance_check,
    apply_linear_map,
)
from .lift import (
    GradedSpace,
    ordered_shuffles,
    F_embed,
    lift_signature,
    lift_path_oracle,
    signature_functoriality_check,
)
from .rtree import (
    TreePoint,
    PrefixOrder,
    prefix_order,
    meet,
    tree_distance,
    tree_factorization,
    concat_continuity_gap,
    sample_rational_forest,
    four_point_report,
)

__version__ = "0.1.0"
