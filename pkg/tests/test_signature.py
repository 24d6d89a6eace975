import numpy as np
import pytest

import oracles
from pathsig.paths import PolyPath, concat, reverse
from pathsig.reduction import insert_spurs
from pathsig.signature import distinguishing_level, logsig, sig, sig_prefix_path
from pathsig.tensor_algebra import (
    basis_vector,
    group_inverse,
    is_group_like,
    is_lie,
    level1_series,
    max_level_diff,
    tensor_exp,
    tensor_mul,
    unit,
)

L_PATH = PolyPath([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])


def random_path(rng, n_segments, dim, scale=1.0):
    steps = rng.uniform(-scale, scale, size=(n_segments, dim))
    return PolyPath(np.vstack([np.zeros(dim), np.cumsum(steps, axis=0)]))


# ---------------------------------------------------------------------------
# sig

def test_constant_path_has_identity_signature():
    assert max_level_diff(sig(PolyPath.constant([1.0, 2.0]), 4), unit(2, 4)) == 0.0


def test_single_segment_is_exponential_and_matches_quadrature():
    rng = np.random.default_rng(0)
    v = rng.uniform(-1, 1, size=2)
    seg = PolyPath(np.vstack([np.zeros(2), v]))
    g = sig(seg, 4)
    assert max_level_diff(g, tensor_exp(level1_series(v, 4))) < 1e-15
    # quadrature oracle converges to the same coefficients
    errs = []
    for mesh in (2**10, 2**12, 2**14):
        quad = oracles.iterated_integral_riemann(seg.vertices, (1, 2, 2), mesh)
        errs.append(abs(quad - g.coefficient((1, 2, 2))))
    assert errs[-1] < 1e-4
    assert errs[0] > errs[-1]


def test_l_path_level2_signed_area():
    g = sig(L_PATH, 2)
    area = 0.5 * (g.coefficient((1, 2)) - g.coefficient((2, 1)))
    assert area == pytest.approx(0.5, abs=1e-15)


def test_sig_depth_validation():
    with pytest.raises(ValueError):
        sig(L_PATH, 0)


# ---------------------------------------------------------------------------
# logsig

def test_logsig_constant_is_zero():
    ls = logsig(PolyPath.constant([0.0, 0.0]), 3)
    assert all(np.abs(lv).max(initial=0.0) == 0.0 for lv in ls.levels)


def test_logsig_single_segment_is_increment():
    rng = np.random.default_rng(1)
    v = rng.uniform(-1, 1, size=3)
    ls = logsig(PolyPath(np.vstack([np.zeros(3), v])), 4)
    assert np.abs(ls.levels[1] - v).max() < 1e-15
    for n in (2, 3, 4):
        assert np.abs(ls.levels[n]).max() < 1e-15


def test_logsig_l_path_level2_is_half_commutator():
    ls = logsig(L_PATH, 2)
    assert ls.coefficient((1, 2)) == pytest.approx(0.5)
    assert ls.coefficient((2, 1)) == pytest.approx(-0.5)


# ---------------------------------------------------------------------------
# prefix path

def test_prefix_path_of_constant():
    gp = sig_prefix_path(PolyPath([[1.0, 1.0], [1.0, 1.0 + 1e-30]]), 3)
    for g in gp.samples:
        assert max_level_diff(g, unit(2, 3)) < 1e-15


def test_prefix_path_level1_is_running_increment():
    rng = np.random.default_rng(2)
    x = random_path(rng, 5, 3)
    gp = sig_prefix_path(x, 3)
    for k, g in enumerate(gp.samples):
        assert np.abs(g.levels[1] - (x.vertices[k] - x.vertices[0])).max() < 1e-13


def test_prefix_path_chen_increments():
    rng = np.random.default_rng(3)
    x = random_path(rng, 5, 2)
    gp = sig_prefix_path(x, 4)
    for j in range(x.n_segments):
        seg = x.vertices[j + 1] - x.vertices[j]
        expected = tensor_exp(level1_series(seg, 4))
        assert max_level_diff(gp.increment(j), expected) < 1e-12


# ---------------------------------------------------------------------------
# distinguishing level

def test_distinguishing_level_equal_is_none():
    rng = np.random.default_rng(4)
    g = sig(random_path(rng, 4, 2), 4)
    assert distinguishing_level(g, g) is None


def test_distinguishing_level_scaled_exponential():
    e1 = basis_vector(2, 1)
    a = tensor_exp(level1_series(e1, 3))
    b = tensor_exp(level1_series(2 * e1, 3))
    assert distinguishing_level(a, b) == 1


def test_spur_insertion_is_indistinguishable():
    rng = np.random.default_rng(5)
    x = random_path(rng, 5, 3)
    y = insert_spurs(x, rng, 8)
    for depth in (2, 4, 6):
        assert distinguishing_level(sig(x, depth), sig(y, depth)) is None


def test_distinguishing_level_requires_same_space():
    with pytest.raises(ValueError):
        distinguishing_level(unit(2, 3), unit(3, 3))


# ---------------------------------------------------------------------------
# structural properties

def test_chen_identity_random_pairs():
    rng = np.random.default_rng(6)
    for _ in range(30):
        d = int(rng.integers(2, 5))
        x = random_path(rng, int(rng.integers(1, 9)), d)
        y = random_path(rng, int(rng.integers(1, 9)), d)
        diff = max_level_diff(sig(concat(x, y), 5), tensor_mul(sig(x, 5), sig(y, 5)))
        assert diff < 1e-11


def test_inverse_property():
    rng = np.random.default_rng(7)
    for _ in range(10):
        x = random_path(rng, 5, 3)
        assert max_level_diff(tensor_mul(sig(x, 5), sig(reverse(x), 5)), unit(3, 5)) < 1e-11


def test_every_signature_is_group_like():
    rng = np.random.default_rng(8)
    for _ in range(10):
        x = random_path(rng, int(rng.integers(1, 7)), int(rng.integers(2, 4)))
        assert is_group_like(sig(x, 4), 1e-9)


def test_collinear_midpoints_leave_signature_unchanged():
    rng = np.random.default_rng(9)
    x = random_path(rng, 4, 3)
    refined = [x.vertices[0]]
    for a, b in zip(x.vertices, x.vertices[1:]):
        refined.append(a + (b - a) / 3.0)
        refined.append(b)
    y = PolyPath(np.array(refined))
    assert max_level_diff(sig(x, 4), sig(y, 4)) < 1e-12


def test_scaling_acts_by_level_degree():
    rng = np.random.default_rng(10)
    x = random_path(rng, 4, 2)
    lam = 0.7
    g = sig(x, 4)
    h = sig(PolyPath(lam * x.vertices), 4)
    for n in range(5):
        assert np.abs(h.levels[n] - lam**n * g.levels[n]).max() < 1e-12


def test_logsig_passes_lie_test():
    rng = np.random.default_rng(11)
    for _ in range(10):
        x = random_path(rng, 6, 3)
        assert is_lie(logsig(x, 5), 1e-9)


def test_group_inverse_of_signature_is_reverse():
    rng = np.random.default_rng(12)
    x = random_path(rng, 5, 2)
    assert max_level_diff(group_inverse(sig(x, 4)), sig(reverse(x), 4)) < 1e-12
