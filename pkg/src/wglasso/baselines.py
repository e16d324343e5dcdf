"""Ledoit-Wolf shrinkage toward a scaled identity."""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .dataset import Dataset, center, sample_cov


@dataclass(frozen=True)
class LwEstimate:
    sigma_hat: np.ndarray
    omega_hat: np.ndarray
    shrinkage: float
    target_scale: float


def ledoit_wolf(d: Dataset) -> LwEstimate:
    """Well-conditioned covariance estimate ``s * mu I + (1 - s) S``.

    ``mu = tr(S)/p`` and the intensity ``s = min(1, b2 / d2)`` uses the
    plug-in estimates of Ledoit and Wolf (2004): ``d2`` is the scaled
    squared distance of ``S`` from the target and ``b2`` the averaged
    squared deviation of the per-observation outer products from ``S``.
    """
    d = center(d)
    X = d.rows
    n, p = X.shape
    S = sample_cov(d)
    mu = float(np.trace(S)) / p
    d2 = float(np.sum((S - mu * np.eye(p)) ** 2)) / p
    if d2 == 0.0:
        shrinkage = 1.0
    else:
        # sum_i ||x_i x_i' - S||_F^2 without forming the outer products
        sq = np.sum(X**2, axis=1)
        b_bar2 = (float(np.sum(sq**2)) - n * float(np.sum(S**2))) / (n**2 * p)
        shrinkage = min(1.0, max(b_bar2, 0.0) / d2)
    sigma_hat = shrinkage * mu * np.eye(p) + (1.0 - shrinkage) * S
    sigma_hat = 0.5 * (sigma_hat + sigma_hat.T)
    return LwEstimate(sigma_hat, linalg.inverse(sigma_hat), shrinkage, mu)
