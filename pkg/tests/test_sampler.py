import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from randaztec.aztec import (domino_cells, enumerate_tilings, partition_function_exact,
                             tiling_to_signatures, tiling_weight_exact)
from randaztec.analytic.sgf import schur_measure_level
from randaztec.environment import discrete, point_mass
from randaztec.harness.verify import exact_edge_weights
from randaztec.sampler import (chain_sample, reduce_weights, reduce_weights_one_periodic,
                               sample_level, shuffle_sample)
from randaztec.sampler.chain import chain_draw
from randaztec.sampler.shuffling import (algorithm_law_exact, edges_to_tiling, grow,
                                         grow_reference, level_signature_from_edges,
                                         one_periodic_weights, shuffle_edges)


def test_uniform_reduction_is_one_half():
    for P in reduce_weights(np.ones((8, 8))):
        assert np.allclose(P, 0.5)


def test_one_periodic_tables_match_general():
    W = [2.0, 0.5, 3.0, 1.7, 0.2]
    gen = reduce_weights(one_periodic_weights(W))
    row = reduce_weights_one_periodic(W)
    for P, r in zip(gen, row):
        assert np.allclose(P, r[:, None])  # independent of the transverse coordinate


@pytest.mark.parametrize("W", [(1, 1), (Fraction(2), Fraction(1, 3)), (Fraction(5), Fraction(7))])
def test_exact_algorithm_law_m2(W):
    law = algorithm_law_exact(exact_edge_weights(W))
    Z = partition_function_exact(W)
    tilings = enumerate_tilings(2)
    assert set(law) == set(tilings)
    for t in tilings:
        assert law[t] == tiling_weight_exact(t, W) / Z


def test_numba_matches_reference():
    probs = reduce_weights_one_periodic([2.0, 0.5, 3.0, 1.0, 0.7, 4.0])
    for seed in range(20):
        assert np.array_equal(grow(probs, seed), grow_reference(probs, seed))


def test_determinism_and_validity():
    t1 = shuffle_sample([1.5] * 12, 99)
    assert t1 == shuffle_sample([1.5] * 12, 99)
    t1.validate()
    assert shuffle_sample([1.5] * 12, 100) != t1


def test_invalid_weights():
    with pytest.raises(ValueError):
        shuffle_sample([1.0, 0.0], 1)
    with pytest.raises(ValueError):
        chain_sample([0.5, 1.0], 1)
    with pytest.raises(ValueError):
        chain_sample([0.5] * 13, 1)


def _band_check(counts, probs, n):
    for t, p in probs.items():
        sd = math.sqrt(n * p * (1 - p))
        assert abs(counts.get(t, 0) - n * p) <= 4 * sd + 1e-9


def test_shuffle_frequencies_uniform_m2():
    n = 100_000
    probs = reduce_weights_one_periodic([1.0, 1.0])
    keys = Counter(grow(probs, s).tobytes() for s in range(n))
    counts = {edges_to_tiling(np.frombuffer(k, np.uint8).reshape(4, 4)): v
              for k, v in keys.items()}
    assert len(counts) == 8
    _band_check(counts, {t: 1 / 8 for t in enumerate_tilings(2)}, n)


def test_chain_m1():
    n = 20_000
    b = 0.3
    hits = sum(chain_draw([b], s)[1] == (1,) for s in range(n))
    assert abs(hits - n * b) <= 4 * math.sqrt(n * b * (1 - b))


def test_chain_matches_shuffle_in_law_m3():
    """Two-sample chi-square between the two samplers, M = 3."""
    W = [2.0, 0.5, 3.0]
    b = [w / (1 + w) for w in W]
    n = 30_000
    probs = reduce_weights_one_periodic(W)
    sh = Counter(tiling_to_signatures(edges_to_tiling(grow(probs, s)))
                 for s in range(n))
    ch = Counter(chain_sample(b, s + 10 ** 6) for s in range(n))
    keys = sorted(set(sh) | set(ch), key=str)
    tab = np.array([[sh.get(k, 0) for k in keys], [ch.get(k, 0) for k in keys]])
    from scipy.stats import chi2_contingency
    assert chi2_contingency(tab).pvalue > 1e-4


def test_frozen_corners_m200():
    M = 200
    t = shuffle_sample([1.0] * M, 1)
    corner = {k: Counter() for k in range(4)}
    for d, c in zip(t.dominos, t.classes()):
        for x, y in domino_cells(d):
            px, py = x - 0.5, y - 0.5
            if math.hypot(px, py) > 1.1 * M / math.sqrt(2):
                k = (0 if px > 0 else 1) if abs(px) > abs(py) else (2 if py > 0 else 3)
                corner[k][c] += 1
    for k, cnt in corner.items():
        assert max(cnt.values()) / sum(cnt.values()) > 0.99
    assert len({cnt.most_common(1)[0][0] for cnt in corner.values()}) == 4


def test_level_signatures_from_edges():
    W = [2.0, 0.5, 3.0, 1.0, 0.7]
    for s in range(30):
        X = shuffle_edges(W, s)
        seq = tiling_to_signatures(edges_to_tiling(X))
        for N in range(1, 6):
            assert level_signature_from_edges(X, N) == seq.lam(N)
        assert seq.lam(5) == (0,) * 5


def test_level_law_m2_point_mass():
    n = 40_000
    draws = Counter(sample_level(point_mass(0.5), 1, n, master_seed=3, M=2))
    law = schur_measure_level(1, [Fraction(1, 2)] * 2)
    assert set(draws) <= set(law)
    _band_check(draws, {k: float(v) for k, v in law.items()}, n)


def test_sample_level_modes():
    W = [1.0] * 6
    a = list(sample_level(W, 3, 5, master_seed=1))
    assert a == list(sample_level(W, 3, 5, master_seed=1))
    d = discrete([(0.2, 0.5), (0.8, 0.5)])
    q = list(sample_level(d, 3, 5, master_seed=1, mode="quenched", M=6))
    assert len(q) == 5 and all(len(x) == 3 for x in q)
    with pytest.raises(ValueError):
        list(sample_level(d, 3, 5, master_seed=1))
    with pytest.raises(ValueError):
        list(sample_level(W, 7, 5, master_seed=1))
    with pytest.raises(ValueError):
        list(sample_level(W, 3, 5, master_seed=1, mode="both"))
