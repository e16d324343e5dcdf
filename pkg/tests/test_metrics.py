import numpy as np
import pytest

from wglasso.errors import DimensionMismatch
from wglasso.metrics import evaluate, fnorm_loss, kl_loss, kl_printed, support_f1
from wglasso.simgen import ar1_precision

from oracles import random_spd


def test_f1_perfect():
    om = ar1_precision(4)
    assert support_f1(om, om)[:4] == (1.0, 1.0, 1.0, 3)


def test_f1_arithmetic():
    true = np.eye(5)
    true[0, 1] = true[1, 0] = true[1, 2] = true[2, 1] = true[2, 3] = true[3, 2] = 0.2
    est = np.eye(5)
    est[0, 1] = est[1, 0] = est[1, 2] = est[2, 1] = est[3, 4] = est[4, 3] = 0.1
    f1, P, R, tp, fp, fn = support_f1(est, true)
    assert (tp, fp, fn) == (2, 1, 1)
    assert P == R == f1 == pytest.approx(2 / 3)


def test_f1_diagonal_estimate():
    assert support_f1(np.eye(4), ar1_precision(4)) == (0.0, 0.0, 0.0, 0, 0, 3)


def test_f1_zero_division_conventions():
    assert support_f1(np.eye(3), np.eye(3)) == (0.0, 0.0, 0.0, 0, 0, 0)
    assert support_f1(np.ones((3, 3)), np.eye(3))[:3] == (0.0, 0.0, 0.0)


def test_f1_scale_invariant(rng):
    est = np.where(rng.uniform(size=(6, 6)) < 0.4, rng.standard_normal((6, 6)), 0.0)
    est = est + est.T
    true = ar1_precision(6)
    for c in (-3.0, 1e-8, 7.5):
        assert support_f1(c * est, true) == support_f1(est, true)


def test_fnorm_examples():
    assert fnorm_loss(np.eye(3), np.eye(3)) == 0.0
    assert fnorm_loss(2 * np.eye(2), np.eye(2)) == pytest.approx(np.sqrt(2))
    assert fnorm_loss(ar1_precision(3), np.eye(3)) == pytest.approx(0.4)


def test_kl_examples():
    assert kl_loss(np.eye(3), np.eye(3)) == pytest.approx(0.0, abs=1e-14)
    assert kl_loss(2 * np.eye(2), np.eye(2)) == pytest.approx(2 * (1 - np.log(2)))
    assert kl_loss(0.5 * np.eye(2), np.eye(2)) == pytest.approx(2 * (0.5 + np.log(2) - 1))


def test_kl_numeric_values():
    assert kl_loss(2 * np.eye(2), np.eye(2)) == pytest.approx(0.6137, abs=1e-4)
    assert kl_loss(0.5 * np.eye(2), np.eye(2)) == pytest.approx(0.3863, abs=1e-4)


def test_kl_printed():
    assert kl_printed(2 * np.eye(2), np.eye(2)) == pytest.approx(2.0)


def test_kl_nonnegative_zero_at_truth(rng):
    for _ in range(50):
        a, b = random_spd(rng, 5), random_spd(rng, 5)
        assert kl_loss(a, b) >= 0
        assert abs(kl_loss(a, a)) < 1e-10


def test_kl_congruence_invariance(rng):
    for _ in range(100):
        p = int(rng.integers(2, 9))
        a, b = random_spd(rng, p), random_spd(rng, p)
        M = rng.standard_normal((p, p)) + 3 * np.eye(p)
        assert kl_loss(M.T @ a @ M, M.T @ b @ M) == pytest.approx(kl_loss(a, b), abs=1e-8)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        support_f1(np.eye(2), np.eye(3))
    with pytest.raises(DimensionMismatch):
        fnorm_loss(np.eye(2), np.ones((2, 3)))


def test_evaluate_bundles_everything():
    rep = evaluate(2 * np.eye(2), np.eye(2))
    assert rep.fnorm == pytest.approx(np.sqrt(2))
    assert rep.kl == pytest.approx(kl_loss(2 * np.eye(2), np.eye(2)))
    assert set(rep.as_dict()) >= {"f1", "fnorm", "kl", "kl_printed"}
