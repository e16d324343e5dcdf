"""Graphical lasso by block coordinate descent.

Solves ``min_Omega -log|Omega| + tr(Omega S) + rho * pen(Omega)`` where
``pen`` is either the full entrywise l1 norm or its off-diagonal part.
The solver keeps a working covariance ``W`` and, column by column, solves
the lasso dual ``min_b 0.5 b'W11 b - s12'b + rho |b|_1`` by cyclic
coordinate descent with soft-thresholding.
"""

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from . import linalg
from .errors import DimensionMismatch, NotPositiveDefinite


@dataclass(frozen=True)
class GlassoConfig:
    rho: float = 0.1
    penalize_diagonal: bool = True
    inner_tol: float = 1e-6
    inner_max_sweeps: int = 500
    outer_tol: float = 1e-5
    outer_max_sweeps: int = 200

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be nonnegative")
        if self.inner_tol <= 0 or self.outer_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.inner_max_sweeps < 1 or self.outer_max_sweeps < 1:
            raise ValueError("sweep caps must be positive")


@dataclass
class GlassoSolution:
    omega: np.ndarray
    sigma: np.ndarray
    objective: float
    sweeps: int
    converged: bool
    trace: list = field(default_factory=list, repr=False)
    coef: np.ndarray = field(default=None, repr=False)


def penalty(omega, penalize_diagonal=True) -> float:
    total = float(np.sum(np.abs(omega)))
    if not penalize_diagonal:
        total -= float(np.sum(np.abs(np.diag(omega))))
    return total


def objective_value(omega, S, cfg: GlassoConfig) -> float:
    """``-log|omega| + tr(omega S) + rho * pen(omega)`` under ``cfg``'s penalty mode."""
    omega = np.asarray(omega, dtype=float)
    S = np.asarray(S, dtype=float)
    if omega.shape != S.shape:
        raise DimensionMismatch(f"shapes differ: {omega.shape} vs {S.shape}")
    return (
        -linalg.log_det(omega)
        + float(np.sum(omega * S))
        + cfg.rho * penalty(omega, cfg.penalize_diagonal)
    )


@njit(cache=True)
def _soft(x, t):
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


@njit(cache=True)
def _sweep(S, W, B, rho, inner_tol, inner_max):
    """One pass over all columns; returns the largest change in W."""
    p = S.shape[0]
    m = p - 1
    idx = np.empty(m, dtype=np.int64)
    V = np.empty((m, m))
    s = np.empty(m)
    beta = np.empty(m)
    r = np.empty(m)
    max_change = 0.0
    for j in range(p):
        k = 0
        for i in range(p):
            if i != j:
                idx[k] = i
                k += 1
        for a in range(m):
            ia = idx[a]
            s[a] = S[ia, j]
            beta[a] = B[ia, j]
            for b in range(m):
                V[a, b] = W[ia, idx[b]]
        for a in range(m):
            acc = 0.0
            for b in range(m):
                acc += V[a, b] * beta[b]
            r[a] = acc
        for _ in range(inner_max):
            delta = 0.0
            for a in range(m):
                old = beta[a]
                z = s[a] - (r[a] - V[a, a] * old)
                new = _soft(z, rho) / V[a, a]
                if new != old:
                    diff = new - old
                    for b in range(m):
                        r[b] += V[b, a] * diff
                    beta[a] = new
                    if abs(diff) > delta:
                        delta = abs(diff)
            if delta < inner_tol:
                break
        for a in range(m):
            ia = idx[a]
            B[ia, j] = beta[a]
            change = abs(r[a] - W[ia, j])
            if change > max_change:
                max_change = change
            W[ia, j] = r[a]
            W[j, ia] = r[a]
    return max_change


@njit(cache=True)
def _recover_omega(W, B):
    p = W.shape[0]
    omega = np.zeros((p, p))
    for j in range(p):
        quad = 0.0
        for i in range(p):
            if i != j:
                quad += W[i, j] * B[i, j]
        ojj = 1.0 / (W[j, j] - quad)
        omega[j, j] = ojj
        for i in range(p):
            if i != j:
                omega[i, j] = -B[i, j] * ojj + 0.0
    # Average the two column estimates; exact zeros survive when both agree.
    for i in range(p):
        for j in range(i + 1, p):
            v = 0.5 * (omega[i, j] + omega[j, i])
            omega[i, j] = v
            omega[j, i] = v
    return omega


def _safe_objective(omega, S, cfg):
    try:
        return objective_value(omega, S, cfg)
    except NotPositiveDefinite:
        return float("inf")


def glasso(S, cfg: GlassoConfig, warm_start=None) -> GlassoSolution:
    """Sparse inverse covariance for a fixed covariance input ``S``.

    Parameters
    ----------
    S : ndarray of shape (p, p)
        Symmetric input covariance with nonnegative diagonal.
    cfg : GlassoConfig
    warm_start : tuple (W, B), optional
        Working covariance and coefficient matrix from an earlier solve of a
        nearby problem. Only used when ``rho > 0``.

    Returns
    -------
    GlassoSolution
        ``converged`` is False when the outer sweep cap was hit; the last
        iterate is returned in that case.

    Raises
    ------
    NotPositiveDefinite
        If ``rho == 0`` and ``S`` is singular, or a working diagonal entry is
        not positive.
    """
    S = linalg.sym(S)
    p = S.shape[0]
    if np.any(np.diag(S) < 0):
        raise ValueError("S must have a nonnegative diagonal")

    if cfg.rho == 0.0:
        omega = linalg.inverse(S)
        obj = objective_value(omega, S, cfg)
        return GlassoSolution(omega, S.copy(), obj, 0, True, [obj])

    diag_pen = cfg.rho if cfg.penalize_diagonal else 0.0
    wdiag = np.diag(S) + diag_pen
    if np.any(wdiag <= 0):
        raise NotPositiveDefinite("working covariance has a zero diagonal entry")

    if p == 1:
        omega = np.array([[1.0 / wdiag[0]]])
        obj = objective_value(omega, S, cfg)
        return GlassoSolution(omega, np.array([[wdiag[0]]]), obj, 0, True, [obj])

    if warm_start is not None:
        W = np.array(warm_start[0], dtype=float)
        B = np.array(warm_start[1], dtype=float)
        np.fill_diagonal(W, wdiag)
    else:
        W = S.copy()
        np.fill_diagonal(W, wdiag)
        B = np.zeros((p, p))

    off = ~np.eye(p, dtype=bool)
    scale = float(np.mean(np.abs(S[off])))
    threshold = cfg.outer_tol * scale

    trace = []
    converged = False
    sweeps = 0
    for sweeps in range(1, cfg.outer_max_sweeps + 1):
        change = _sweep(S, W, B, cfg.rho, cfg.inner_tol, cfg.inner_max_sweeps)
        omega = _recover_omega(W, B)
        trace.append(_safe_objective(omega, S, cfg))
        if change <= threshold:
            converged = True
            break

    obj = trace[-1]
    if not np.isfinite(obj):
        raise NotPositiveDefinite("glasso iterate is not positive definite")
    return GlassoSolution(omega, W, obj, sweeps, converged, trace, B)
