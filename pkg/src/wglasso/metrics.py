"""Accuracy of a precision estimate against ground truth."""

from dataclasses import asdict, dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch


@dataclass(frozen=True)
class EvalReport:
    f1: float
    precision: float
    recall: float
    tp: int
    fp: int
    fn: int
    fnorm: float
    kl: float
    kl_printed: float

    def as_dict(self):
        return asdict(self)


def _pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b


def support_f1(omega_hat, omega_true):
    """F1 of the estimated edge set (strict upper-triangle nonzeros).

    Returns ``(f1, precision, recall, tp, fp, fn)``. Precision or recall is 0
    when its denominator is 0, and so is F1 when both are.
    """
    omega_hat, omega_true = _pair(omega_hat, omega_true)
    iu = np.triu_indices(omega_hat.shape[0], 1)
    est = omega_hat[iu] != 0
    true = omega_true[iu] != 0
    tp = int(np.sum(est & true))
    fp = int(np.sum(est & ~true))
    fn = int(np.sum(~est & true))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return f1, precision, recall, tp, fp, fn


def fnorm_loss(omega_hat, omega_true) -> float:
    omega_hat, omega_true = _pair(omega_hat, omega_true)
    return linalg.frobenius_dist(omega_hat, omega_true)


def kl_loss(omega_hat, omega_true) -> float:
    """Stein loss ``tr(A) - log|A| - p`` with ``A = omega_hat omega_true^-1``."""
    omega_hat, omega_true = _pair(omega_hat, omega_true)
    sigma_true = linalg.inverse(omega_true)
    p = omega_hat.shape[0]
    tr = float(np.sum(omega_hat * sigma_true))
    logdet = linalg.log_det(omega_hat) - linalg.log_det(omega_true)
    return tr - logdet - p


def kl_printed(omega_hat, omega_true) -> float:
    """``tr(omega_hat omega_true^-1) - p``: the log-determinant-free variant."""
    omega_hat, omega_true = _pair(omega_hat, omega_true)
    sigma_true = linalg.inverse(omega_true)
    return float(np.sum(omega_hat * sigma_true)) - omega_hat.shape[0]


def evaluate(omega_hat, omega_true) -> EvalReport:
    f1, precision, recall, tp, fp, fn = support_f1(omega_hat, omega_true)
    return EvalReport(
        f1=f1,
        precision=precision,
        recall=recall,
        tp=tp,
        fp=fp,
        fn=fn,
        fnorm=fnorm_loss(omega_hat, omega_true),
        kl=kl_loss(omega_hat, omega_true),
        kl_printed=kl_printed(omega_hat, omega_true),
    )
