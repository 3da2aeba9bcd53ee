"""Streams of lam^(N) drawn from full shuffling samples."""
from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from ..environment import CriticalRegime, FixedRegime, WeightDistribution, sample_environment
from ..rng import MASK64, mix
from .shuffling import grow, level_signature_from_edges, reduce_weights_one_periodic

QUENCHED_INDEX = MASK64  # sample index reserved for the shared quenched environment


def _as_regime(env):
    if isinstance(env, WeightDistribution):
        return FixedRegime(env)
    if isinstance(env, (FixedRegime, CriticalRegime)):
        return env
    return None


def sample_weights(env, M: int, sample_seed: int) -> np.ndarray:
    regime = _as_regime(env)
    if regime is None:
        return np.asarray(env, dtype=float)
    return sample_environment(regime, M, sample_seed).weights


def levels_from_edges(X: np.ndarray, Ns: Sequence[int]) -> list[tuple[int, ...]]:
    return [level_signature_from_edges(X, N) for N in Ns]


def sample_levels_one(W: Sequence[float], seed: int, Ns: Sequence[int], probs=None):
    """Draw one tiling with weights W and return lam^(N) for each N in Ns."""
    if probs is None:
        probs = reduce_weights_one_periodic(W)
    return levels_from_edges(grow(probs, seed), Ns)


def sample_level(env, N: int, count: int, master_seed: int, mode: str = "annealed",
                 M: int | None = None, run_id: int = 0) -> Iterator[tuple[int, ...]]:
    """Yield ``count`` draws of lam^(N).

    ``env`` is either an explicit weight vector W (then M = len(W) and the
    environment is fixed) or a distribution / regime.  In annealed mode the
    environment is redrawn for every sample from the sample seed; in
    quenched mode it is drawn once from the seed reserved for index
    ``QUENCHED_INDEX``."""
    if mode not in ("annealed", "quenched"):
        raise ValueError("mode must be 'annealed' or 'quenched'")
    regime = _as_regime(env)
    if regime is None:
        W = np.asarray(env, dtype=float)
        M = len(W)
    elif M is None:
        raise ValueError("M is required when env is a distribution")
    if not 1 <= N <= M:
        raise ValueError(f"level N={N} outside 1..{M}")
    shared = None
    if regime is None or mode == "quenched":
        if regime is not None:
            W = sample_weights(regime, M, mix(master_seed, run_id, QUENCHED_INDEX))
        shared = reduce_weights_one_periodic(W)
    for i in range(count):
        seed = mix(master_seed, run_id, i)
        if shared is None:
            (lam,) = sample_levels_one(sample_weights(regime, M, seed), seed, [N])
        else:
            (lam,) = sample_levels_one(None, seed, [N], probs=shared)
        yield lam
