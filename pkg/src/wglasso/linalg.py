"""Dense symmetric / positive-definite kernels.

Symmetric matrices are plain ``numpy`` float arrays of shape ``(p, p)``.
:func:`sym` builds one by mirroring the upper triangle so symmetry holds
exactly.
"""

import numpy as np
from scipy.linalg import cho_solve

from .errors import DimensionMismatch, NotPositiveDefinite

# A pivot at or below PIVOT_RTOL * max(diag) counts as a failure.
PIVOT_RTOL = 1e-12


def sym(a) -> np.ndarray:
    """Return a float copy of ``a`` with the lower triangle mirrored from the upper."""
    a = np.array(a, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    iu = np.triu_indices(a.shape[0], 1)
    a.T[iu] = a[iu]
    return a


def _check_square(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def cholesky(m) -> np.ndarray:
    """Lower-triangular Cholesky factor of a symmetric matrix.

    Raises
    ------
    NotPositiveDefinite
        If any pivot is not above ``PIVOT_RTOL`` times the largest diagonal entry.
    """
    m = _check_square(m)
    p = m.shape[0]
    scale = float(np.max(np.abs(np.diag(m)))) if p else 0.0
    if not np.all(np.isfinite(m)) or scale <= 0.0:
        raise NotPositiveDefinite("matrix is not positive definite")
    try:
        L = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("matrix is not positive definite") from exc
    # LAPACK accepts tiny positive pivots; enforce the scale-relative floor.
    if np.min(np.diag(L)) ** 2 <= PIVOT_RTOL * scale:
        raise NotPositiveDefinite("matrix is numerically singular")
    return L


def is_pd(m) -> bool:
    try:
        cholesky(m)
    except NotPositiveDefinite:
        return False
    return True


def log_det(m) -> float:
    """log |m| computed as twice the log-sum of the Cholesky diagonal."""
    L = cholesky(m)
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def inverse(m) -> np.ndarray:
    """Inverse of a positive definite matrix via its Cholesky factor."""
    L = cholesky(m)
    p = L.shape[0]
    inv = cho_solve((L, True), np.eye(p))
    return 0.5 * (inv + inv.T)


def frobenius_dist(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def quad_form(m, x) -> float:
    """Return ``x' m x``."""
    m = _check_square(m)
    x = np.asarray(x, dtype=float)
    if x.shape != (m.shape[0],):
        raise DimensionMismatch(f"vector of length {x.size} for a {m.shape[0]}x{m.shape[0]} matrix")
    return float(x @ m @ x)


def quad_forms(m, X) -> np.ndarray:
    """Row-wise quadratic forms ``x_i' m x_i`` for the rows of ``X``."""
    m = _check_square(m)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != m.shape[0]:
        raise DimensionMismatch(f"rows of length {X.shape[-1]} for a {m.shape[0]}x{m.shape[0]} matrix")
    return np.einsum("ij,jk,ik->i", X, m, X)


def l1_norm(m) -> float:
    """Entrywise l1 norm, diagonal included."""
    return float(np.sum(np.abs(m)))
