"""Seed derivation and random streams.

Sample ``i`` of run ``run_id`` gets the 64-bit seed ``mix(master_seed,
run_id, i)`` built from the SplitMix64 finalizer.  Two streams hang off a
sample seed:

* the tiling stream: counter-mode SplitMix64, the k-th uniform is
  ``(splitmix64(seed + k * GOLDEN) >> 11) * 2**-53`` for k = 1, 2, ...;
  growth step n of the shuffle uses counters ``sum_{m<n} m^2 + I*n + J + 1``
  for block (I, J);
* the environment stream: numpy ``Philox4x64`` keyed by
  ``mix(seed, ENV_STREAM, 0)``;
* the signature-chain stream (reference sampler): the same counter-mode
  SplitMix64 construction keyed by ``mix(seed, CHAIN_STREAM, 0)``.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
ENV_STREAM = 0x656E76
CHAIN_STREAM = 0x636861

_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)


def splitmix64(x: int) -> int:
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix(master_seed: int, run_id: int, index: int) -> int:
    h = splitmix64(master_seed & MASK64)
    h = splitmix64(h ^ (run_id & MASK64))
    return splitmix64(h ^ (index & MASK64))


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms number start, start+1, ..., start+count-1 of the counter stream."""
    k = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * _C1
        z = (z ^ (z >> np.uint64(27))) * _C2
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed & MASK64))


def env_generator(sample_seed: int) -> np.random.Generator:
    return generator(mix(sample_seed, ENV_STREAM, 0))


SEED_RULE = ("sample seed = splitmix64(splitmix64(splitmix64(master) ^ run_id) ^ i); "
             "tiling uniforms: counter-mode SplitMix64 on the sample seed (53-bit mantissa); "
             "environment: Philox4x64 keyed by mix(sample seed, 0x656E76, 0)")
