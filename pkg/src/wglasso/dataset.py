"""Observation matrices, centering, and covariance initializers."""

import csv
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import rankdata

from .errors import DegenerateColumn, ParseError

MAD_NORMAL = 1.4826


@dataclass(frozen=True)
class Dataset:
    """An ``n x p`` observation matrix.

    ``means`` holds the column means that were subtracted by :func:`center`
    (zeros for data that has not been centered).
    """

    rows: np.ndarray
    centered: bool = False
    means: np.ndarray = field(default=None, repr=False)
    labels: tuple = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim == 1:
            rows = rows[:, None]
        if rows.ndim != 2:
            raise ValueError("rows must be a 2-d array")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        if self.means is None:
            object.__setattr__(self, "means", np.zeros(rows.shape[1]))

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def p(self) -> int:
        return self.rows.shape[1]

    def subset(self, index) -> "Dataset":
        return replace(self, rows=self.rows[np.asarray(index)])


def load_csv(path, has_header=False) -> Dataset:
    """Read a comma-separated numeric table, one observation per line.

    Raises
    ------
    ParseError
        On ragged rows or non-numeric cells; the message names the 1-based
        line and column.
    OSError
        If the file cannot be read.
    """
    labels = None
    rows = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if not record or all(not c.strip() for c in record):
                continue
            if has_header and labels is None:
                labels = tuple(c.strip() for c in record)
                width = len(labels)
                continue
            if width is None:
                width = len(record)
            if len(record) != width:
                raise ParseError(
                    f"line {lineno}: expected {width} fields, found {len(record)}",
                    row=lineno,
                )
            values = []
            for col, cell in enumerate(record, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"line {lineno}, column {col}: non-numeric value {cell.strip()!r}",
                        row=lineno,
                        column=col,
                    ) from None
            rows.append(values)
    if not rows:
        raise ParseError("no data rows")
    return Dataset(np.array(rows), labels=labels)


def write_csv(path, matrix, header=None, fmt="%.17g"):
    np.savetxt(path, np.asarray(matrix), delimiter=",", fmt=fmt,
               header=",".join(header) if header else "", comments="")


def center(d: Dataset) -> Dataset:
    """Subtract column means; idempotent on already-centered data."""
    if d.centered:
        return d
    mu = d.rows.mean(axis=0)
    return replace(d, rows=d.rows - mu, centered=True, means=d.means + mu)


def sample_cov(d: Dataset) -> np.ndarray:
    """``(1/n) X'X`` of the (assumed centered) rows."""
    X = d.rows
    S = X.T @ X / d.n
    return 0.5 * (S + S.T)


def robust_scale(x) -> float:
    """Median absolute deviation scaled for consistency at the normal."""
    x = np.asarray(x, dtype=float)
    return MAD_NORMAL * float(np.median(np.abs(x - np.median(x))))


def spearman_corr(X) -> np.ndarray:
    """Spearman rank correlation matrix with average ranks for ties."""
    R = rankdata(np.asarray(X, dtype=float), axis=0)
    R -= R.mean(axis=0)
    norms = np.sqrt(np.sum(R * R, axis=0))
    C = (R.T @ R) / np.outer(norms, norms)
    np.fill_diagonal(C, 1.0)
    return 0.5 * (C + C.T)


def spearman_cov(d: Dataset) -> np.ndarray:
    """Rank-based robust covariance.

    The Spearman correlation ``r`` is mapped to the Gaussian scale through
    ``2 sin(pi r / 6)`` and rescaled by the per-column MAD.
    """
    if d.n < 3:
        raise ValueError("spearman_cov needs at least 3 observations")
    scales = np.array([robust_scale(d.rows[:, j]) for j in range(d.p)])
    zero = np.flatnonzero(scales <= 0.0)
    if zero.size:
        raise DegenerateColumn(f"column {zero[0] + 1} has zero MAD", column=int(zero[0]))
    R = 2.0 * np.sin(np.pi / 6.0 * spearman_corr(d.rows))
    cov = R * np.outer(scales, scales)
    np.fill_diagonal(cov, scales**2)
    return cov
