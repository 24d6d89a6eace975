"""Polynomial 1-form integrals as linear functionals of the signature.

A polynomial 1-form sum(c * x^alpha dx^i) integrated along a path from
the origin equals the pairing of an explicit word sum with the path's
signature: on group-like elements coordinate products are shuffle
products of single-letter words (<u,S><w,S> = <u sh w, S>), and the
outer integration appends the target letter to every word.

All integrals normalise the base point to the origin: inputs are
translated so that x_0 = 0 before evaluating, for both the functional
and the numeric quadrature route.
"""

from __future__ import annotations

import numpy as np

from .signature import sig
from .tensor_algebra import (
    GroupElement,
    TensorSeries,
    WordSum,
    evaluate,
    max_level_diff,
    word_sum_shuffle,
)

__all__ = [
    "Polynomial1Form",
    "form_to_functional",
    "integrate_numeric",
    "invariance_check",
    "apply_linear_map",
]


class Polynomial1Form:
    """Finite sum of terms c * x^alpha dx^letter.

    ``terms`` is a sequence of (alpha, letter, coefficient) with alpha a
    tuple of nonnegative exponents of length dim and letter in 1..dim.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim, terms):
        dim = int(dim)
        cleaned = []
        for alpha, letter, coef in terms:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dim:
                raise ValueError(f"exponent multi-index {alpha} has wrong length for dim {dim}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            if not 1 <= letter <= dim:
                raise ValueError(f"letter {letter} outside alphabet 1..{dim}")
            if coef != 0:
                cleaned.append((alpha, int(letter), float(coef)))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", tuple(cleaned))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial1Form is immutable")

    def degree(self):
        """Largest total monomial degree among the terms."""
        return max((sum(alpha) for alpha, _, _ in self.terms), default=0)

    def coefficient_functions(self, points):
        """Evaluate the d coefficient functions at an (m, dim) array of points."""
        points = np.asarray(points, dtype=np.float64)
        out = np.zeros((points.shape[0], self.dim))
        for alpha, letter, coef in self.terms:
            mono = np.ones(points.shape[0])
            for a, k in zip(alpha, range(self.dim)):
                if a:
                    mono = mono * points[:, k] ** a
            out[:, letter - 1] += coef * mono
        return out

    def to_json_obj(self):
        return [
            {"alpha": list(alpha), "letter": letter, "coef": coef}
            for alpha, letter, coef in self.terms
        ]

    @classmethod
    def from_json_obj(cls, obj, dim=None):
        terms = [(t["alpha"], t["letter"], t["coef"]) for t in obj]
        if dim is None:
            if not terms:
                raise ValueError("cannot infer dim from an empty form")
            dim = len(terms[0][0])
        return cls(dim, terms)


def _monomial_functional(alpha):
    """Word sum F with x^alpha = <F, S(x)> for paths from the origin."""
    out = WordSum({(): 1})
    for letter, power in enumerate(alpha, start=1):
        for _ in range(power):
            out = word_sum_shuffle(out, WordSum({(letter,): 1}))
    return out


def form_to_functional(form, depth):
    """Word sum F with integral of the form along x = <F, sig(x, depth)>
    for every piecewise-linear path starting at the origin."""
    needed = form.degree() + 1
    if needed > depth:
        raise ValueError(
            f"form of degree {form.degree()} needs depth >= {needed}, got {depth}"
        )
    total = WordSum()
    for alpha, letter, coef in form.terms:
        total = total + coef * _monomial_functional(alpha).append_letter(letter)
    return total


def integrate_numeric(form, x, mesh):
    """Midpoint-rule line integral of the form along the path (translated to
    start at the origin), with ``mesh`` sub-steps per segment."""
    if mesh < 1:
        raise ValueError("mesh must be >= 1 per segment")
    path = x.based_at_origin()
    total = 0.0
    offsets = (np.arange(mesh) + 0.5) / mesh
    for k in range(path.n_segments):
        a = path.vertices[k]
        b = path.vertices[k + 1]
        mids = a + offsets[:, None] * (b - a)
        coeffs = form.coefficient_functions(mids)
        total += float(coeffs.sum(axis=0) @ ((b - a) / mesh))
    return total


def invariance_check(form, x, y, depth, tol=1e-9, mesh=4096):
    """Verify that the integral of the form agrees along two paths with
    equal signatures.  The signature pairings are compared, and the
    numeric quadratures are compared as the stronger empirical form.
    Raises if the signatures differ through the required depth."""
    sx = sig(x.based_at_origin(), depth)
    sy = sig(y.based_at_origin(), depth)
    if max_level_diff(sx, sy) > 1e-8:
        raise ValueError("paths do not have equal signatures through the given depth")
    functional = form_to_functional(form, depth)
    pairing_gap = abs(evaluate(sx, functional) - evaluate(sy, functional))
    numeric_gap = abs(integrate_numeric(form, x, mesh) - integrate_numeric(form, y, mesh))
    quad_tol = max(tol, 100.0 / mesh**2)
    return pairing_gap <= tol and numeric_gap <= quad_tol


def apply_linear_map(matrix, g):
    """Extend a linear map on level 1 multiplicatively to every level.

    ``matrix`` has shape (d_out, d_in) with d_in the level-1 dimension of
    ``g``.  Signatures transform naturally: applying the map to sig(x)
    equals the signature of the vertexwise-mapped path.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    d_out, d_in = matrix.shape
    if d_in != g.dim:
        raise ValueError(f"matrix has {d_in} columns, series level 1 has dim {g.dim}")
    levels = [np.asarray(g.levels[0], dtype=np.float64).copy()]
    for n in range(1, g.depth + 1):
        t = np.asarray(g.levels[n], dtype=np.float64).reshape((d_in,) * n)
        for axis in range(n):
            t = np.tensordot(matrix, t, axes=([1], [axis]))
            t = np.moveaxis(t, 0, axis)
        levels.append(t.reshape(-1))
    cls = GroupElement if isinstance(g, GroupElement) else TensorSeries
    return cls(d_out, g.depth, levels)
