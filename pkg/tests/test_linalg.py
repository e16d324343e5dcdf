import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wglasso import linalg
from wglasso.errors import DimensionMismatch, NotPositiveDefinite

from oracles import random_spd


def test_sym_mirrors_upper_triangle():
    a = linalg.sym([[1.0, 2.0], [99.0, 3.0]])
    assert a[1, 0] == 2.0
    assert np.array_equal(a, a.T)


def test_cholesky_identity():
    assert np.array_equal(linalg.cholesky(np.eye(3)), np.eye(3))


def test_cholesky_hand_case():
    L = linalg.cholesky([[4.0, 2.0], [2.0, 3.0]])
    np.testing.assert_allclose(L, [[2.0, 0.0], [1.0, np.sqrt(2.0)]], atol=1e-15)
    np.testing.assert_allclose(L @ L.T, [[4.0, 2.0], [2.0, 3.0]], atol=1e-14)


@pytest.mark.parametrize("m", [
    [[1.0, 2.0], [2.0, 1.0]],
    [[1.0, 1.0], [1.0, 1.0]],
    [[0.0, 0.0], [0.0, 0.0]],
    [[1.0, 0.0], [0.0, 1e-14]],
])
def test_cholesky_rejects_non_pd(m):
    with pytest.raises(NotPositiveDefinite):
        linalg.cholesky(m)


def test_cholesky_reconstructs(rng):
    for p in (1, 4, 12, 40):
        m = random_spd(rng, p, 1e3)
        L = linalg.cholesky(m)
        err = np.linalg.norm(L @ L.T - m) / np.linalg.norm(m)
        assert err < 1e-10 * p


@pytest.mark.parametrize("m, expected", [
    (np.eye(5), 0.0),
    (np.diag([2.0, 2.0]), 2 * np.log(2)),
    ([[4.0, 2.0], [2.0, 3.0]], np.log(8.0)),
])
def test_log_det_examples(m, expected):
    assert linalg.log_det(m) == pytest.approx(expected, abs=1e-12)


def test_log_det_known_spectrum(rng):
    for p in (3, 10, 30):
        eig = rng.uniform(0.1, 10.0, p)
        Q, _ = np.linalg.qr(rng.standard_normal((p, p)))
        m = (Q * eig) @ Q.T
        assert abs(linalg.log_det(m) - np.sum(np.log(eig))) < 1e-8


def test_log_det_not_pd():
    with pytest.raises(NotPositiveDefinite):
        linalg.log_det([[1.0, 2.0], [2.0, 1.0]])


@pytest.mark.parametrize("m, expected", [
    (np.eye(4), np.eye(4)),
    (np.diag([2.0, 4.0]), np.diag([0.5, 0.25])),
    ([[2.0, 1.0], [1.0, 2.0]], np.array([[2.0, -1.0], [-1.0, 2.0]]) / 3.0),
])
def test_inverse_examples(m, expected):
    np.testing.assert_allclose(linalg.inverse(m), expected, atol=1e-14)


def test_inverse_random(rng):
    for p in (2, 7, 25):
        m = random_spd(rng, p, 100.0)
        inv = linalg.inverse(m)
        assert np.array_equal(inv, inv.T)
        assert np.max(np.abs(m @ inv - np.eye(p))) < 1e-8 * p
        assert linalg.frobenius_dist(m @ inv, np.eye(p)) < 1e-8 * p


@pytest.mark.parametrize("a, b, expected", [
    (np.eye(2), np.eye(2), 0.0),
    (2 * np.eye(2), np.eye(2), np.sqrt(2)),
    ([[1.0, 0.2], [0.2, 1.0]], np.eye(2), np.sqrt(0.08)),
])
def test_frobenius_dist(a, b, expected):
    assert linalg.frobenius_dist(a, b) == pytest.approx(expected, abs=1e-15)


def test_frobenius_dist_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        linalg.frobenius_dist(np.eye(2), np.eye(3))


@pytest.mark.parametrize("m, x, expected", [
    (np.eye(2), [1.0, 1.0], 2.0),
    (np.diag([3.0, 5.0]), [1.0, 2.0], 23.0),
    ([[1.0, 0.2], [0.2, 1.0]], [1.0, -1.0], 1.6),
])
def test_quad_form(m, x, expected):
    assert linalg.quad_form(m, x) == pytest.approx(expected, abs=1e-14)


def test_quad_form_mismatch():
    with pytest.raises(DimensionMismatch):
        linalg.quad_form(np.eye(2), [1.0, 2.0, 3.0])


def test_quad_forms_matches_loop(rng):
    m = random_spd(rng, 4)
    X = rng.standard_normal((6, 4))
    expected = [linalg.quad_form(m, x) for x in X]
    np.testing.assert_allclose(linalg.quad_forms(m, X), expected, rtol=1e-13)


@settings(max_examples=200, deadline=None)
@given(p=st.integers(1, 50), seed=st.integers(0, 2**32 - 1), cond=st.floats(1.0, 1e4))
def test_determinant_l1_bound(p, seed, cond):
    """sqrt(det) <= (||Omega||_1 / p)^(p/2), compared in log space."""
    m = random_spd(np.random.default_rng(seed), p, cond)
    lhs = 0.5 * linalg.log_det(m)
    rhs = 0.5 * p * np.log(linalg.l1_norm(m) / p)
    assert rhs - lhs >= -1e-9
