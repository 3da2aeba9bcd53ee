"""Estimators with batch-means standard errors and normality diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .config import MIN_BATCHES


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float

    def z(self, target: float) -> float:
        if self.se == 0:
            return 0.0 if self.value == target else math.copysign(math.inf, self.value - target)
        return (self.value - target) / self.se


def _fmean(x) -> float:
    return math.fsum(x) / len(x)


def batch_means_se(x: np.ndarray, batches: int = MIN_BATCHES) -> float:
    """Standard error of the mean from `batches` contiguous batches."""
    x = np.asarray(x, dtype=float)
    if batches < MIN_BATCHES:
        raise ValueError(f"need at least {MIN_BATCHES} batches")
    if len(x) < batches:
        raise ValueError("fewer samples than batches")
    m = np.array([_fmean(b) for b in np.array_split(x, batches)])
    return float(np.std(m, ddof=1) / math.sqrt(batches))


def mean_estimate(x, batches: int = MIN_BATCHES) -> Estimate:
    x = np.asarray(x, dtype=float)
    return Estimate(_fmean(x), batch_means_se(x, batches))


def cov_estimate(x, y, batches: int = MIN_BATCHES) -> Estimate:
    """Unbiased sample covariance; its error from batch means of the centred products."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    prod = (x - _fmean(x)) * (y - _fmean(y))
    return Estimate(math.fsum(prod) / (n - 1), batch_means_se(prod, batches) * n / (n - 1))


@dataclass(frozen=True)
class Normality:
    skewness: float
    excess_kurtosis: float
    anderson_darling: float


def normality(x) -> Normality:
    x = np.asarray(x, dtype=float)
    if np.std(x) == 0:
        return Normality(0.0, 0.0, 0.0)
    z = (x - x.mean()) / x.std(ddof=1)
    return Normality(float(stats.skew(z)), float(stats.kurtosis(z)),
                     float(stats.anderson(z, dist="norm").statistic))
