import math

import mpmath
import numpy as np
import pytest

from randaztec.analytic.lemmas import (RandomG, eigen_check, lemma_property_tests,
                                       monomial_symmetric, partitions, roots_vanishing_check,
                                       sym_lhs_limit, sym_rhs, symmetrization_check)
from randaztec.analytic.params import root_of_unity


def test_partitions_counts():
    assert [sum(1 for _ in partitions(n)) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert sorted(partitions(4, max_len=2)) == [(2, 2), (3, 1), (4,)]


def test_monomial_symmetric_small():
    xs = [2, 3, 5]
    assert monomial_symmetric((1,), xs) == 10
    assert monomial_symmetric((1, 1), xs) == 2 * 3 + 2 * 5 + 3 * 5
    assert monomial_symmetric((2, 1), xs) == sum(a * a * b for a in xs for b in xs if a != b)


def test_symmetrization_on_known_case():
    """G = u_1^m: the divided difference of x^m at any m+1 points is 1."""
    for m in range(1, 5):
        G = RandomG({(m, 0, 0): 1.0}, 0, 0, 0)
        xi = [mpmath.mpc(1 + j, 0.3 * j) for j in range(m + 1)]
        assert sym_lhs_limit(G, m, xi) == pytest.approx(1, abs=1e-12)
        assert sym_rhs(G, m) == pytest.approx(1, abs=1e-12)


def test_symmetrization_exponential():
    """G = exp(d u_1): both sides equal d^m / m!."""
    d = 0.7 - 0.2j
    for m in (1, 2, 3):
        G = RandomG({}, 1.0, d, 0)
        xi = [mpmath.mpc(np.cos(j), np.sin(2 * j)) for j in range(m + 1)]
        want = d ** m / math.factorial(m)
        assert sym_lhs_limit(G, m, xi) == pytest.approx(want, rel=1e-8)
        assert sym_rhs(G, m) == pytest.approx(want, rel=1e-12)


def test_symmetrization_random():
    err, n = symmetrization_check(n_random=20, seed=3)
    assert n == 20 and err < 1e-6


def test_roots_vanishing_random():
    err, n = roots_vanishing_check(n_random=40, seed=4)
    assert n == 40 and err < 1e-10


def test_power_sum_at_roots():
    # the elementary fact the vanishing rests on: p_j(roots of unity) = 0 for 0 < j < m
    for m in range(2, 7):
        w = root_of_unity(m)
        for j in range(1, m):
            assert abs(sum(w ** (i * j) for i in range(m))) < 1e-12


def test_eigen_relation():
    failures, cases = eigen_check()
    assert not failures and cases > 0


def test_full_report():
    rep = lemma_property_tests(seed=0)
    assert rep.passed
    assert rep.sym_cases == 50 and rep.roots_cases == 100
