import numpy as np
import pytest

from wglasso import linalg
from wglasso.dataset import (Dataset, center, load_csv, sample_cov, spearman_corr,
                             spearman_cov)
from wglasso.errors import DegenerateColumn, ParseError


def test_load_csv(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2\n3,4\n5,6\n")
    d = load_csv(f)
    assert (d.n, d.p) == (3, 2)
    assert not d.centered


def test_load_csv_header(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,b\n1,2\n3,4\n5,6\n")
    d = load_csv(f, has_header=True)
    assert d.n == 3
    assert d.labels == ("a", "b")


def test_load_csv_ragged(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2\n3\n")
    with pytest.raises(ParseError) as err:
        load_csv(f)
    assert err.value.row == 2


def test_load_csv_non_numeric_names_cell(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("1,2\n3,abc\n")
    with pytest.raises(ParseError, match="line 2, column 2"):
        load_csv(f)


def test_load_csv_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_csv(tmp_path / "nope.csv")


@pytest.mark.parametrize("rows, expected", [
    ([[1, 1], [3, 3]], [[-1, -1], [1, 1]]),
    ([[-1, 2], [1, -2]], [[-1, 2], [1, -2]]),
    ([[2], [4], [6]], [[-2], [0], [2]]),
])
def test_center(rows, expected):
    c = center(Dataset(rows))
    np.testing.assert_allclose(c.rows, expected)
    assert c.centered


def test_center_keeps_means():
    c = center(Dataset([[1.0, 10.0], [3.0, 14.0]]))
    np.testing.assert_allclose(c.means, [2.0, 12.0])
    assert center(c) is c


@pytest.mark.parametrize("rows, expected", [
    ([[1, 0], [-1, 0]], [[1, 0], [0, 0]]),
    ([[1, 1], [-1, -1]], [[1, 1], [1, 1]]),
    ([[2, 0], [0, 2], [-2, 0], [0, -2]], [[2, 0], [0, 2]]),
])
def test_sample_cov(rows, expected):
    np.testing.assert_allclose(sample_cov(Dataset(rows, centered=True)), expected)


def test_sample_cov_psd_and_permutation_equivariant(rng):
    X = rng.standard_normal((8, 12))  # p > n: singular
    d = center(Dataset(X))
    S = sample_cov(d)
    linalg.cholesky(S + 1e-10 * np.eye(12))
    perm = rng.permutation(12)
    Sp = sample_cov(center(Dataset(X[:, perm])))
    np.testing.assert_allclose(Sp, S[np.ix_(perm, perm)], atol=1e-14)


def test_spearman_perfect_rank_correlation():
    x = np.arange(10.0)
    d = Dataset(np.c_[x, np.exp(x)])
    cov = spearman_cov(d)
    corr = cov[0, 1] / np.sqrt(cov[0, 0] * cov[1, 1])
    assert corr == pytest.approx(1.0)


def test_spearman_independent_columns_near_zero(rng):
    n = 2000
    d = Dataset(rng.standard_normal((n, 3)))
    cov = spearman_cov(d)
    corr = cov / np.sqrt(np.outer(np.diag(cov), np.diag(cov)))
    off = corr[np.triu_indices(3, 1)]
    assert np.all(np.abs(off) < 3 / np.sqrt(n))


def test_spearman_constant_column():
    d = Dataset(np.c_[np.arange(5.0), np.ones(5)])
    with pytest.raises(DegenerateColumn):
        spearman_cov(d)


def test_spearman_corr_monotone_invariance(rng):
    X = rng.standard_normal((50, 4))
    Y = X.copy()
    Y[:, 2] = Y[:, 2] ** 3
    R1 = 2 * np.sin(np.pi / 6 * spearman_corr(X))
    R2 = 2 * np.sin(np.pi / 6 * spearman_corr(Y))
    np.testing.assert_allclose(R1, R2, atol=1e-14)


def test_spearman_ties_use_average_ranks():
    from scipy.stats import spearmanr

    X = np.array([[1, 2], [1, 3], [2, 3], [3, 1], [3, 5.0]])
    assert spearman_corr(X)[0, 1] == pytest.approx(spearmanr(X[:, 0], X[:, 1])[0])


def test_spearman_gaussian_scale(rng):
    """Diagonal is MAD^2 and the off-diagonal recovers a Gaussian correlation."""
    C = np.array([[1.0, 0.6], [0.6, 1.0]]) * 4.0
    X = rng.multivariate_normal([0, 0], C, size=20000)
    cov = spearman_cov(Dataset(X))
    np.testing.assert_allclose(cov, C, rtol=0.05)
