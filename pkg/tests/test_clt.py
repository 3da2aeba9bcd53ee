import itertools

import numpy as np
import pytest

from randaztec.analytic import (ModelParams, clt_cov_critical, clt_cov_critical_bg2, clt_cov_fixed,
                                clt_cov_general_schur, critical_k1_closed,
                                exact_cov_p1_two_levels, exact_var_p1_annealed, fixed_k1_closed)
from randaztec.analytic.clt import bg2_covariance
from randaztec.environment import CriticalRegime, point_mass, standard_environments

ENVS = standard_environments()
ALPHAS = [0.5, 1 / 3, 0.8]


@pytest.mark.parametrize("name", list(ENVS))
@pytest.mark.parametrize("alpha", ALPHAS[:2])
def test_fixed_contour_matches_jet_formula(name, alpha):
    p = ModelParams.from_alpha(alpha, ENVS[name])
    for k, l in itertools.product(range(1, 4), repeat=2):
        a = clt_cov_fixed(k, l, p)
        b = clt_cov_general_schur(k, l, p)
        assert a == pytest.approx(b, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("name", list(ENVS))
@pytest.mark.parametrize("alpha", ALPHAS)
def test_fixed_k1_and_symmetry(name, alpha):
    p = ModelParams.from_alpha(alpha, ENVS[name])
    assert clt_cov_fixed(1, 1, p) == pytest.approx(fixed_k1_closed(p), rel=1e-10, abs=1e-14)
    for k, l in [(1, 2), (1, 3), (2, 3)]:
        assert clt_cov_fixed(k, l, p) == pytest.approx(clt_cov_fixed(l, k, p), rel=1e-9, abs=1e-14)


@pytest.mark.parametrize("name", list(ENVS))
def test_fixed_covariance_matrix_psd(name):
    p = ModelParams.from_alpha(0.4, ENVS[name])
    C = np.array([[clt_cov_fixed(k, l, p) for l in range(1, 4)] for k in range(1, 4)])
    assert np.linalg.eigvalsh(C).min() > -1e-10


def test_point_mass_has_no_fixed_fluctuations():
    p = ModelParams.from_alpha(0.3, point_mass(0.7))
    for k, l in itertools.product(range(1, 4), repeat=2):
        assert abs(clt_cov_fixed(k, l, p)) < 1e-12


def test_literal_variant_differs_by_a():
    d = ENVS["bernoulli_w"]
    half = ModelParams.from_alpha(0.5, d)  # a = 1
    assert clt_cov_fixed(2, 2, half, literal=True) == pytest.approx(clt_cov_fixed(2, 2, half))
    p = ModelParams.from_alpha(0.25, d)  # a = 3
    assert clt_cov_fixed(1, 1, p, literal=True) != pytest.approx(clt_cov_fixed(1, 1, p))


def test_fixed_k1_is_limit_of_exact_variance():
    d = ENVS["bernoulli_w"]
    for alpha in ALPHAS:
        M = 10 ** 6
        N = round(alpha * M)
        p = ModelParams.from_sizes(N, M, d)
        assert exact_var_p1_annealed(N, M, d) / N ** 3 == pytest.approx(fixed_k1_closed(p),
                                                                          rel=1e-5)


def test_fixed_errors():
    p = ModelParams.from_alpha(0.5, point_mass(0.5))
    with pytest.raises(ValueError):
        clt_cov_fixed(0, 1, p)


LEVEL_PAIRS = [(0.5, 0.5), (0.3, 0.6), (1 / 3, 2 / 3), (0.2, 0.9)]


@pytest.mark.parametrize("beta,sigma", [(0.5, 1.0), (0.3, 0.4), (0.7, 0.0)])
@pytest.mark.parametrize("a1,a2", LEVEL_PAIRS)
def test_critical_two_routes(beta, sigma, a1, a2):
    for k1, k2 in itertools.product(range(1, 4), repeat=2):
        x = clt_cov_critical(k1, k2, a1, a2, beta, sigma)
        y = clt_cov_critical_bg2(k1, k2, a1, a2, beta, sigma)
        assert x == pytest.approx(y, rel=1e-9, abs=1e-13)


@pytest.mark.parametrize("a1,a2", LEVEL_PAIRS)
def test_critical_k1_closed_and_level_swap(a1, a2):
    beta, sigma = 0.4, 0.8
    assert clt_cov_critical(1, 1, a1, a2, beta, sigma) == pytest.approx(
        critical_k1_closed(a1, a2, beta, sigma), rel=1e-10)
    for k1, k2 in [(1, 2), (2, 3), (3, 1)]:
        assert clt_cov_critical(k1, k2, a1, a2, beta, sigma) == pytest.approx(
            clt_cov_critical(k2, k1, a2, a1, beta, sigma), rel=1e-12)


def test_critical_sigma_zero_is_pure_gff():
    beta = 0.35
    for k1, k2 in itertools.product(range(1, 4), repeat=2):
        a1, a2 = 0.3, 0.7
        F1 = lambda x: (1 / a1 - 1) * beta / (1 - beta + beta * x)  # noqa: E731
        F2 = lambda x: (1 / a2 - 1) * beta / (1 - beta + beta * x)  # noqa: E731
        gff = a1 ** k1 * a2 ** k2 * bg2_covariance(k1, k2, F1, F2, None)
        assert clt_cov_critical(k1, k2, a1, a2, beta, 0.0) == pytest.approx(gff, rel=1e-10)


def test_critical_environment_part():
    """The sigma^2 part at one level is rank one and equals alpha^2 (1-alpha) sigma^2 for k=1."""
    beta, alpha = 0.5, 0.4
    env = {}
    for k, l in itertools.product(range(1, 4), repeat=2):
        env[k, l] = (clt_cov_critical(k, l, alpha, alpha, beta, 1.0)
                     - clt_cov_critical(k, l, alpha, alpha, beta, 0.0))
    assert env[1, 1] == pytest.approx(alpha ** 2 * (1 - alpha), rel=1e-10)
    for k, l in itertools.product(range(1, 4), repeat=2):
        assert env[k, l] ** 2 == pytest.approx(env[k, k] * env[l, l], rel=1e-9)
    # quadratic in sigma
    s2 = clt_cov_critical(2, 3, alpha, alpha, beta, 2.0) - clt_cov_critical(2, 3, alpha, alpha,
                                                                             beta, 0.0)
    assert s2 == pytest.approx(4 * env[2, 3], rel=1e-10)


def test_critical_k1_is_limit_of_exact_covariance():
    reg = CriticalRegime(0.5, 1.0)
    M = 10 ** 6
    for a1, a2 in LEVEL_PAIRS:
        N1, N2 = round(a1 * M), round(a2 * M)
        exact = exact_cov_p1_two_levels(N1, N2, M, reg.at_size(M)) / M ** 2
        assert exact == pytest.approx(critical_k1_closed(N1 / M, N2 / M, 0.5, 1.0), rel=1e-5)


def test_critical_errors():
    with pytest.raises(ValueError):
        clt_cov_critical(1, 1, 0.0, 0.5, 0.5, 1.0)
    with pytest.raises(ValueError):
        clt_cov_critical(1, 1, 0.5, 1.0, 0.5, 1.0)


@pytest.mark.parametrize("name", list(ENVS))
def test_contour_robustness(name):
    """Doubling the nodes or scaling the radii by 1.25 moves results by < 1e-9."""
    from randaztec.analytic import lln_moment_contour
    from randaztec.analytic.params import ContourSpec

    p = ModelParams.from_alpha(1 / 3, ENVS[name])
    for k in range(1, 7):
        base = lln_moment_contour(k, p)
        for c in (ContourSpec(1.0, 0.5, 1024), ContourSpec(1.0, 0.625, 512)):
            assert abs(lln_moment_contour(k, p, c) - base) < 1e-9
    for k, l in itertools.product(range(1, 4), repeat=2):
        base = clt_cov_fixed(k, l, p)
        assert abs(clt_cov_fixed(k, l, p, nodes=512) - base) < 1e-9
        assert abs(clt_cov_fixed(k, l, p, eps=0.125) - base) < 1e-9
        base = clt_cov_critical(k, l, 0.3, 0.6, 0.5, 1.0)
        assert abs(clt_cov_critical(k, l, 0.3, 0.6, 0.5, 1.0, nodes=512) - base) < 1e-9
        assert abs(clt_cov_critical(k, l, 0.3, 0.6, 0.5, 1.0, eps=0.0625) - base) < 1e-9
