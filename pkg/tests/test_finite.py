import itertools
from fractions import Fraction as Fr

import numpy as np
import pytest

from randaztec.analytic import (exact_cov_p1_two_levels, exact_mean_pk_annealed,
                                exact_mean_pk_quenched, exact_var_p1_annealed)
from randaztec.analytic.sgf import annealed_level_law, schur_measure_level
from randaztec.combinatorics import all_sequences, moments_pk, sequence_probability
from randaztec.environment import CriticalRegime, discrete, point_mass
from randaztec.sampler.levels import sample_levels_one

BETAS = [
    [Fr(1, 2)] * 4,
    [Fr(1, 3), Fr(3, 5), Fr(1, 4), Fr(2, 3)],
    [Fr(9, 10), Fr(1, 10), Fr(1, 2), Fr(4, 7)],
]


def _enumerated(betas):
    return [(s, sequence_probability(s, betas).value) for s in all_sequences(len(betas))]


@pytest.mark.parametrize("betas", BETAS)
def test_quenched_mean_matches_enumeration(betas):
    seqs = _enumerated(betas)
    assert sum(w for _, w in seqs) == 1
    fb = [float(b) for b in betas]
    for N, k in itertools.product(range(1, 5), range(1, 5)):
        oracle = float(sum(w * moments_pk(s.lam(N), k) for s, w in seqs))
        assert exact_mean_pk_quenched(k, N, fb) == pytest.approx(oracle, rel=1e-12)


ATOMIC = {
    "bernoulli": discrete([(0.25, 0.5), (0.75, 0.5)]),
    "skewed": discrete([(0.125, 0.25), (0.5, 0.5), (0.875, 0.25)]),
    "critical": CriticalRegime(0.5, 1.0).at_size(16),
}


@pytest.mark.parametrize("name", list(ATOMIC))
def test_annealed_mean_matches_averaged_schur_measure(name):
    d = ATOMIC[name]
    M = 5
    for N in (1, 2, 3, 4):
        law = annealed_level_law(N, M, d)
        for k in (1, 2, 3):
            oracle = float(sum(q * moments_pk(lam, k) for lam, q in law.items()))
            assert exact_mean_pk_annealed(k, N, M, d) == pytest.approx(oracle, rel=1e-12)


@pytest.mark.parametrize("name", list(ATOMIC))
def test_p1_second_moments_match_enumeration(name):
    """Var(p_1) and the two-level covariance against the joint law of all
    levels, averaged over every environment of a 4-level model."""
    d = ATOMIC[name]
    M = 4
    seqs = list(all_sequences(M))
    jumps = np.array([s.jumps() for s in seqs], float)
    P = np.array([[moments_pk(s.lam(N), 1) for N in range(1, M + 1)] for s in seqs], float)
    t = np.arange(1, M + 1)
    E1 = np.zeros(M)
    E2 = np.zeros((M, M))
    for idx in itertools.product(range(len(d.b)), repeat=M):
        b = d.b[list(idx)]
        # sequence weights prod (1-b_t)^t (b_t/(1-b_t))^jump_t
        w = np.prod(d.p[list(idx)]) * np.prod((1 - b) ** t * (b / (1 - b)) ** jumps, axis=1)
        E1 += w @ P
        E2 += (P * w[:, None]).T @ P
    for i in range(M):
        for j in range(i, M):
            cov = E2[i, j] - E1[i] * E1[j]
            N1, N2 = i + 1, j + 1
            assert exact_cov_p1_two_levels(N1, N2, M, d) == pytest.approx(cov, rel=1e-9,
                                                                           abs=1e-10)
            if i == j:
                assert exact_var_p1_annealed(N1, M, d) == pytest.approx(cov, rel=1e-9,
                                                                         abs=1e-10)


def test_mean_p1_closed_form():
    """E p_1 = N (M - N) E[b] + N (N - 1) / 2, so E p_1 / N^2 = 1 - 1/(2N) at M = 2N, b = 1/2."""
    for N in (4, 16, 64):
        assert exact_mean_pk_annealed(1, N, 2 * N, point_mass(0.5)) / N ** 2 == pytest.approx(
            1 - 1 / (2 * N), rel=1e-12)
    d = ATOMIC["skewed"]
    for N, M in [(3, 10), (7, 12), (20, 33)]:
        assert exact_mean_pk_annealed(1, N, M, d) == pytest.approx(
            N * (M - N) * d.mean() + N * (N - 1) / 2, rel=1e-12)


def test_quenched_mean_ignores_levels_below_N():
    betas = [0.3, 0.6, 0.2, 0.8, 0.5]
    other = [0.9, 0.1, 0.7] + betas[3:]
    for k in (1, 2, 3):
        assert exact_mean_pk_quenched(k, 3, betas) == pytest.approx(
            exact_mean_pk_quenched(k, 3, other), rel=1e-13)


def test_quenched_mean_matches_sampler():
    rng = np.random.default_rng(5)
    M, N, n = 24, 10, 3000
    betas = rng.uniform(0.2, 0.8, M)
    W = betas / (1 - betas)
    P = np.array([[moments_pk(lam, k) for k in (1, 2)]
                  for lam in (sample_levels_one(W, s, [N])[0] for s in range(n))], float)
    for j, k in enumerate((1, 2)):
        exact = exact_mean_pk_quenched(k, N, betas)
        z = (P[:, j].mean() - exact) / (P[:, j].std(ddof=1) / np.sqrt(n))
        assert abs(z) < 4


def test_schur_measure_level_normalized():
    betas = [Fr(1, 3), Fr(1, 2), Fr(2, 5), Fr(3, 4), Fr(1, 5)]
    for N in (1, 2, 3):
        assert sum(schur_measure_level(N, betas).values()) == 1
