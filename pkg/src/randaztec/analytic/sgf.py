"""Schur generating functions of the level-N marginal, and the exact Schur
measure they come from."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..combinatorics import schur_at_ones, schur_eval, schur_exact_dual
from ..environment import WeightDistribution


def sgf_annealed(xs: Sequence[complex], N: int, M: int, dist: WeightDistribution) -> complex:
    """(E prod_{i<=N} (1 - b + x_i b))^(M-N) over the quadrature nodes of dist."""
    if not 0 <= N <= M:
        raise ValueError("need 0 <= N <= M")
    if len(xs) != N:
        raise ValueError("need one argument per particle")
    x = np.asarray(xs, dtype=complex)
    prod = np.prod(1 - dist.b[:, None] + x[None, :] * dist.b[:, None], axis=1)
    return complex(np.dot(dist.p, prod) ** (M - N))


def sgf_quenched(xs: Sequence[complex], betas: Sequence[float]) -> complex:
    """prod_{i<=N} prod_{j>N} (1 - beta_j + x_i beta_j) for fixed parameters."""
    N = len(xs)
    x = np.asarray(xs, dtype=complex)[:, None]
    b = np.asarray(betas[N:], dtype=float)[None, :]
    return complex(np.prod(1 - b + x * b))


def level_support(N: int, width: int):
    """All signatures of length N with parts in [0, width]."""
    for parts in itertools.combinations_with_replacement(range(width, -1, -1), N):
        yield tuple(parts)


def schur_measure_level(N: int, betas: Sequence) -> dict[tuple[int, ...], Fraction]:
    """Exact law of lam^(N):
    prod_{i>N} (1 - beta_i)^N * s_lam(1^N) * s_lam'(W_M, ..., W_{N+1}),
    W_i = beta_i / (1 - beta_i).  Supported on lam_1 <= M - N."""
    M = len(betas)
    bs = [Fraction(b) for b in betas]
    W = [b / (1 - b) for b in reversed(bs[N:])]
    pref = Fraction(1)
    for b in bs[N:]:
        pref *= (1 - b) ** N
    out = {}
    for lam in level_support(N, M - N):
        v = pref * schur_at_ones(lam, N) * schur_exact_dual(lam, W)
        if v:
            out[lam] = v
    return out


def sgf_from_measure(xs: Sequence[complex], law: dict) -> complex:
    """sum_lam rho(lam) s_lam(xs) / s_lam(1^N); xs must be pairwise distinct."""
    N = len(xs)
    return complex(sum(float(p) * schur_eval(lam, xs) / float(schur_at_ones(lam, N))
                       for lam, p in law.items()))


def annealed_level_law(N: int, M: int, dist: WeightDistribution) -> dict:
    """Exact annealed law of lam^(N) for an atomic dist: average the quenched
    Schur measure over the environment of levels N+1..M (levels <= N do not
    enter).  The node weights are converted with Fraction, so atoms given in
    binary floating point are used at their exact binary values."""
    if len(dist.b) > 8:
        raise ValueError("annealed_level_law expects an atomic distribution")
    atoms = [(Fraction(float(b)), Fraction(float(p))) for b, p in zip(dist.b, dist.p)]
    total: dict = {}
    for env in itertools.product(atoms, repeat=M - N):
        w = Fraction(1)
        for _, p in env:
            w *= p
        betas = [Fraction(1, 2)] * N + [b for b, _ in env]
        for lam, q in schur_measure_level(N, betas).items():
            total[lam] = total.get(lam, Fraction(0)) + w * q
    return total
