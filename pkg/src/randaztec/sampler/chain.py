"""Reference sampler: walk the signature chain transition by transition.

ups^(t) is drawn from kappa_{beta_t}(lam^(t) -> .) and lam^(t-1) from
pr(ups^(t) -> .), starting at lam^(M) = 0^M.  Each step enumerates every
admissible successor, so this is for small M only.
"""
from __future__ import annotations

import bisect
import itertools
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..combinatorics import SignatureSequence, make_sequence
from ..rng import CHAIN_STREAM, GOLDEN, MASK64, mix, splitmix64

MAX_CHAIN_M = 12


@lru_cache(maxsize=None)
def _eps_table(t: int) -> np.ndarray:
    return np.array(list(itertools.product((0, 1), repeat=t)), dtype=np.int64).reshape(-1, t)


def _log_vandermonde(x: np.ndarray) -> np.ndarray:
    """sum_{i<j} log(x_i - x_j) row-wise; rows must be strictly decreasing."""
    t = x.shape[1]
    if t < 2:
        return np.zeros(x.shape[0])
    i, j = np.triu_indices(t, 1)
    return np.log(x[:, i] - x[:, j]).sum(axis=1)


def kappa_step_table(lam: Sequence[int], beta: float):
    """All ups with lam <_v ups and their kappa probabilities."""
    t = len(lam)
    eps = _eps_table(t)
    y = np.array(lam, dtype=np.int64) + np.arange(t - 1, -1, -1)
    z = y + eps
    ok = np.all(z[:, :-1] > z[:, 1:], axis=1) if t > 1 else np.ones(len(eps), bool)
    eps, z = eps[ok], z[ok]
    d = eps.sum(axis=1)
    logw = d * np.log(beta) + (t - d) * np.log1p(-beta) + _log_vandermonde(z.astype(float))
    logw -= _log_vandermonde(y[None, :].astype(float))[0]
    w = np.exp(logw)
    return np.array(lam, dtype=np.int64) + eps, w


def pr_step_table(ups: Sequence[int]):
    """All lam of length t-1 interlacing ups, with pr probabilities."""
    t = len(ups)
    if t == 1:
        return np.zeros((1, 0), dtype=np.int64), np.ones(1)
    ranges = [range(ups[i + 1], ups[i] + 1) for i in range(t - 1)]
    lams = np.array(list(itertools.product(*ranges)), dtype=np.int64).reshape(-1, t - 1)
    x = lams + np.arange(t - 2, -1, -1)
    logw = _log_vandermonde(x.astype(float))
    w = np.exp(logw - logw.max())
    return lams, w / w.sum()


def _cdf(rows, w):
    c = np.cumsum(w)
    return [tuple(int(v) for v in r) for r in rows], (c / c[-1]).tolist()


@lru_cache(maxsize=1 << 16)
def _kappa_cdf(lam: tuple[int, ...], beta: float):
    return _cdf(*kappa_step_table(lam, beta))


@lru_cache(maxsize=1 << 16)
def _pr_cdf(ups: tuple[int, ...]):
    return _cdf(*pr_step_table(ups))


def _pick(table, u: float) -> tuple[int, ...]:
    rows, c = table
    return rows[min(bisect.bisect_right(c, u), len(rows) - 1)]


def _uniform(key: int, k: int) -> float:
    return (splitmix64((key + k * GOLDEN) & MASK64) >> 11) * 2.0 ** -53


def chain_draw(betas: Sequence[float], seed: int) -> list[tuple[int, ...]]:
    """The flat chain (lam^(M), ups^(M), ..., lam^(1), ups^(1)) of one sample.
    Step j uses uniform number j of the counter stream keyed by
    mix(seed, CHAIN_STREAM, 0)."""
    M = len(betas)
    key = mix(seed, CHAIN_STREAM, 0)
    lam: tuple[int, ...] = (0,) * M
    chain = []
    j = 0
    for t in range(M, 0, -1):
        ups = _pick(_kappa_cdf(lam, float(betas[t - 1])), _uniform(key, j + 1))
        chain += [lam, ups]
        lam = _pick(_pr_cdf(ups), _uniform(key, j + 2))
        j += 2
    return chain


def chain_sample(betas: Sequence[float], seed: int) -> SignatureSequence:
    """One exact sample of the signature chain with parameters beta_1..beta_M."""
    M = len(betas)
    if M > MAX_CHAIN_M:
        raise ValueError(f"chain_sample enumerates transitions and is limited to "
                         f"M <= {MAX_CHAIN_M}; use shuffle_sample for M={M}")
    if any(not 0 < b < 1 for b in betas):
        raise ValueError("chain_sample needs every beta in (0, 1)")
    return make_sequence(M, chain_draw(betas, seed))
