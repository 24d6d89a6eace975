import numpy as np
import pytest

from pathsig.functionals import (
    Polynomial1Form,
    apply_linear_map,
    form_to_functional,
    integrate_numeric,
    invariance_check,
)
from pathsig.paths import PolyPath, concat
from pathsig.reduction import insert_spurs
from pathsig.signature import distinguishing_level, sig
from pathsig.tensor_algebra import (
    WordSum,
    evaluate,
    is_group_like,
    max_level_diff,
    tensor_mul,
    unit,
)

L_PATH = PolyPath([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
SQUARE = PolyPath([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]])


def random_path(rng, n_segments, dim, scale=1.0):
    steps = rng.uniform(-scale, scale, size=(n_segments, dim))
    return PolyPath(np.vstack([np.zeros(dim), np.cumsum(steps, axis=0)]))


def random_form(rng, dim, max_degree=3, n_terms=3):
    terms = []
    for _ in range(n_terms):
        alpha = tuple(int(a) for a in rng.multinomial(int(rng.integers(0, max_degree + 1)),
                                                      np.ones(dim) / dim))
        letter = int(rng.integers(1, dim + 1))
        coef = float(rng.uniform(-1, 1))
        terms.append((alpha, letter, coef))
    return Polynomial1Form(dim, terms)


# ---------------------------------------------------------------------------
# form -> functional

def test_exact_form_is_single_letter_word():
    form = Polynomial1Form(2, [((0, 0), 1, 1.0)])
    assert form_to_functional(form, 2) == WordSum({(1,): 1.0})


def test_linear_coefficient_form():
    form = Polynomial1Form(2, [((1, 0), 2, 1.0)])  # x^1 dx^2
    F = form_to_functional(form, 2)
    assert F == WordSum({(1, 2): 1.0})
    assert evaluate(sig(L_PATH, 2), F) == pytest.approx(1.0)


def test_signed_area_form_on_square():
    form = Polynomial1Form(2, [((0, 1), 1, 1.0)])  # x^2 dx^1
    F = form_to_functional(form, 2)
    value = evaluate(sig(SQUARE, 2), F)
    assert value == pytest.approx(-1.0)
    assert integrate_numeric(form, SQUARE, 2048) == pytest.approx(-1.0, abs=1e-9)


def test_form_degree_overflow_raises():
    form = Polynomial1Form(2, [((2, 1), 1, 1.0)])
    with pytest.raises(ValueError, match="depth"):
        form_to_functional(form, 3)


def test_form_validation():
    with pytest.raises(ValueError):
        Polynomial1Form(2, [((1,), 1, 1.0)])
    with pytest.raises(ValueError):
        Polynomial1Form(2, [((0, 0), 3, 1.0)])
    with pytest.raises(ValueError):
        Polynomial1Form(2, [((-1, 0), 1, 1.0)])


def test_functional_is_linear_in_the_form():
    rng = np.random.default_rng(0)
    f1 = random_form(rng, 2)
    f2 = random_form(rng, 2)
    combo = Polynomial1Form(2, list(f1.terms) + [(a, i, 2.0 * c) for a, i, c in f2.terms])
    F = form_to_functional(combo, 4)
    expected = form_to_functional(f1, 4) + 2.0 * form_to_functional(f2, 4)
    g = sig(random_path(rng, 4, 2), 4)
    assert evaluate(g, F) == pytest.approx(evaluate(g, expected), rel=1e-12)


# ---------------------------------------------------------------------------
# quadrature

def test_quadrature_exact_form_on_unit_segment():
    form = Polynomial1Form(2, [((0, 0), 1, 1.0)])
    seg = PolyPath([[0.0, 0.0], [1.0, 0.0]])
    assert integrate_numeric(form, seg, 16) == pytest.approx(1.0)


def test_quadrature_constant_path_is_zero():
    form = Polynomial1Form(2, [((1, 1), 2, 3.0)])
    assert integrate_numeric(form, PolyPath.constant([2.0, 2.0]), 8) == 0.0


def test_quadrature_requires_positive_mesh():
    form = Polynomial1Form(2, [((0, 0), 1, 1.0)])
    with pytest.raises(ValueError):
        integrate_numeric(form, L_PATH, 0)


def test_functional_matches_quadrature_randomized():
    rng = np.random.default_rng(1)
    for _ in range(30):
        dim = int(rng.integers(2, 4))
        form = random_form(rng, dim)
        x = random_path(rng, int(rng.integers(1, 6)), dim)
        depth = form.degree() + 1
        pairing = evaluate(sig(x.based_at_origin(), depth), form_to_functional(form, depth))
        quad = integrate_numeric(form, x, 2**12)
        assert abs(pairing - quad) <= 1e-7


# ---------------------------------------------------------------------------
# invariance

def test_invariance_under_spur_inflation():
    rng = np.random.default_rng(2)
    x = random_path(rng, 5, 3)
    y = insert_spurs(x, rng, 6)
    form = random_form(rng, 3)
    assert invariance_check(form, x, y, form.degree() + 1)


def test_invariance_under_reparametrization():
    rng = np.random.default_rng(3)
    x = random_path(rng, 4, 2)
    refined = [x.vertices[0]]
    for a, b in zip(x.vertices, x.vertices[1:]):
        refined.append(0.5 * (a + b))
        refined.append(b)
    y = PolyPath(np.array(refined))
    form = random_form(rng, 2)
    assert invariance_check(form, x, y, form.degree() + 1)


def test_invariance_check_rejects_different_signatures():
    rng = np.random.default_rng(4)
    x = random_path(rng, 4, 2)
    y = random_path(rng, 4, 2)
    form = random_form(rng, 2)
    with pytest.raises(ValueError):
        invariance_check(form, x, y, form.degree() + 1)


def test_exact_forms_cannot_separate_concatenation_order():
    # integrals of dx^i agree on x*y and y*x although the signatures differ
    rng = np.random.default_rng(5)
    x = random_path(rng, 3, 2)
    y = random_path(rng, 3, 2)
    xy = concat(x, y).based_at_origin()
    yx = concat(y, x).based_at_origin()
    for letter in (1, 2):
        form = Polynomial1Form(2, [((0, 0), letter, 1.0)])
        F = form_to_functional(form, 2)
        assert evaluate(sig(xy, 2), F) == pytest.approx(evaluate(sig(yx, 2), F), abs=1e-12)
        assert integrate_numeric(form, xy, 512) == pytest.approx(
            integrate_numeric(form, yx, 512), abs=1e-9
        )
    assert distinguishing_level(sig(xy, 2), sig(yx, 2)) == 2


# ---------------------------------------------------------------------------
# linear maps on signatures

def test_identity_map_is_identity():
    rng = np.random.default_rng(6)
    g = sig(random_path(rng, 4, 3), 3)
    assert max_level_diff(apply_linear_map(np.eye(3), g), g) < 1e-14


def test_projection_commutes_with_signature():
    rng = np.random.default_rng(7)
    proj = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    for _ in range(10):
        x = random_path(rng, 5, 3)
        lhs = apply_linear_map(proj, sig(x, 4))
        rhs = sig(PolyPath(x.vertices @ proj.T), 4)
        assert max_level_diff(lhs, rhs) <= 1e-11


def test_zero_map_gives_identity_element():
    rng = np.random.default_rng(8)
    g = sig(random_path(rng, 3, 3), 3)
    assert max_level_diff(apply_linear_map(np.zeros((2, 3)), g), unit(2, 3)) == 0.0


def test_linear_map_is_multiplicative():
    rng = np.random.default_rng(9)
    Phi = rng.normal(size=(2, 3))
    g = sig(random_path(rng, 4, 3), 3)
    h = sig(random_path(rng, 4, 3), 3)
    lhs = apply_linear_map(Phi, tensor_mul(g, h))
    rhs = tensor_mul(apply_linear_map(Phi, g), apply_linear_map(Phi, h))
    assert max_level_diff(lhs, rhs) < 1e-12


def test_linear_map_output_is_group_like():
    rng = np.random.default_rng(10)
    Phi = rng.normal(size=(2, 3))
    out = apply_linear_map(Phi, sig(random_path(rng, 4, 3), 4))
    assert is_group_like(out, 1e-9)


def test_linear_map_shape_mismatch():
    rng = np.random.default_rng(11)
    g = sig(random_path(rng, 3, 3), 2)
    with pytest.raises(ValueError):
        apply_linear_map(np.zeros((2, 4)), g)
