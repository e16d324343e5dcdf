"""Ground-truth precision matrices and contaminated Gaussian samples.

Randomness comes from ``numpy.random.Generator(PCG64)``. A run seed is
split with ``SeedSequence`` into one stream per purpose so that, e.g.,
changing the outlier count does not perturb the inlier draws.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .dataset import Dataset

MODEL_KINDS = ("identity", "ar1", "permuted_ar1")
_ALIASES = {"perm-ar1": "permuted_ar1", "perm_ar1": "permuted_ar1", "m1": "identity",
            "m2": "ar1", "m3": "permuted_ar1"}

# Stream indices for SeedSequence.spawn
_INLIERS, _OUTLIERS, _SHUFFLE = 0, 1, 2


def canonical_kind(kind: str) -> str:
    k = _ALIASES.get(kind.lower(), kind.lower())
    if k not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    return k


@dataclass(frozen=True)
class TrueModel:
    kind: str
    p: int
    omega: np.ndarray
    offdiag: float = 0.2
    perm_seed: int = None

    @property
    def sigma(self) -> np.ndarray:
        return linalg.inverse(self.omega)


@dataclass(frozen=True)
class ContaminationSpec:
    n1: int
    gamma: float = 0.0
    mu_shift: object = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.n1 < 2:
            raise ValueError("n1 must be at least 2")

    @property
    def n2(self) -> int:
        return int(round(self.gamma * self.n1))


def ar1_precision(p, offdiag=0.2) -> np.ndarray:
    omega = np.eye(p)
    i = np.arange(p - 1)
    omega[i, i + 1] = offdiag
    omega[i + 1, i] = offdiag
    return omega


def build_model(kind, p, perm_seed=0, offdiag=0.2) -> TrueModel:
    """Model 1 (identity), Model 2 (AR(1) band) or Model 3 (permuted band)."""
    kind = canonical_kind(kind)
    if p < 2:
        raise ValueError("p must be at least 2")
    if kind == "identity":
        omega = np.eye(p)
    else:
        omega = ar1_precision(p, offdiag)
        if kind == "permuted_ar1":
            perm = np.random.default_rng(perm_seed).permutation(p)
            Q = np.eye(p)[perm]
            omega = Q @ omega @ Q.T
    return TrueModel(kind, p, omega, offdiag, perm_seed if kind == "permuted_ar1" else None)


def sample(model: TrueModel, spec: ContaminationSpec):
    """Draw ``n1`` rows from ``N(0, omega^-1)`` plus ``n2`` rows from ``N(mu, I)``.

    Returns the dataset (rows shuffled, not centered) and a boolean mask that
    is True for inlier rows.
    """
    p = model.p
    streams = [np.random.Generator(np.random.PCG64(s))
               for s in np.random.SeedSequence(spec.seed).spawn(3)]
    L = linalg.cholesky(linalg.inverse(model.omega))
    inliers = streams[_INLIERS].standard_normal((spec.n1, p)) @ L.T
    mu = np.broadcast_to(np.asarray(spec.mu_shift, dtype=float), (p,))
    outliers = mu + streams[_OUTLIERS].standard_normal((spec.n2, p))
    rows = np.vstack([inliers, outliers])
    mask = np.r_[np.ones(spec.n1, bool), np.zeros(spec.n2, bool)]
    order = streams[_SHUFFLE].permutation(rows.shape[0])
    return Dataset(rows[order]), mask[order]
