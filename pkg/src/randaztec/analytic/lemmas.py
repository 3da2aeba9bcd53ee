"""Numerical property checks of the symmetrization identities behind the
moment formulas.

Symmetrization: for G symmetric in all but its first argument,

    lim_{u -> 0} sum_i G(u_i, u without u_i) / prod_{j != i} (u_i - u_j)
        = (1/m!) d^m/du^m G(u, u w, ..., u w^m) at u = 0,   w = exp(2 pi i/(m+1)).

The left side is evaluated with mpmath at u_i = eps * xi_i for fixed generic
xi_i (not at roots of unity, which would make the check circular), for a
geometric sequence of eps, and extrapolated to eps = 0 by Neville's scheme.
The right side comes from jets.

Vanishing: a constant-free symmetric polynomial of degree < m is zero at the
m-th roots of unity.  Random such polynomials are built from monomial
symmetric functions m_mu, which involves no power sums.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from ..combinatorics import dk_eigenrelation_check
from ..jets import Jet1
from .params import root_of_unity

mpmath.mp.dps = 60


@dataclass
class RandomG:
    """G(u_1; rest) = poly(u_1, p_1(rest), p_2(rest)) + c exp(d u_1 + e p_1(rest))."""

    coeffs: dict
    c: complex
    d: complex
    e: complex

    @classmethod
    def draw(cls, rng: np.random.Generator, degree: int = 4) -> "RandomG":
        coeffs = {}
        for i, j, k in itertools.product(range(degree + 1), repeat=3):
            if i + j + 2 * k <= degree and rng.random() < 0.6:
                coeffs[(i, j, k)] = complex(rng.normal(), rng.normal())
        z = lambda: complex(rng.normal(), rng.normal()) * 0.7  # noqa: E731
        return cls(coeffs, z(), z(), z())

    def __call__(self, first, rest, exp):
        p1 = sum(rest, 0 * first)
        p2 = sum((r * r for r in rest), 0 * first)
        out = 0 * first
        for (i, j, k), a in self.coeffs.items():
            out = out + a * first ** i * p1 ** j * p2 ** k
        return out + self.c * exp(self.d * first + self.e * p1)


def sym_lhs(G, m: int, xi, eps) -> mpmath.mpc:
    u = [eps * x for x in xi]
    total = mpmath.mpc(0)
    for i in range(m + 1):
        rest = u[:i] + u[i + 1:]
        den = mpmath.mpf(1)
        for j in range(m + 1):
            if j != i:
                den *= u[i] - u[j]
        total += G(u[i], rest, mpmath.exp) / den
    return total


def sym_lhs_limit(G, m: int, xi, eps0: float = 1e-2, steps: int = 7) -> complex:
    """Neville extrapolation of sym_lhs(eps) to eps = 0 along eps0 * 2^-j."""
    hs = [mpmath.mpf(eps0) / 2 ** j for j in range(steps)]
    vals = [sym_lhs(G, m, xi, h) for h in hs]
    T = list(vals)
    for s in range(1, steps):
        for i in range(steps - 1, s - 1, -1):
            T[i] = (hs[i - s] * T[i] - hs[i] * T[i - 1]) / (hs[i - s] - hs[i])
    return complex(T[-1])


def sym_rhs(G, m: int) -> complex:
    u = Jet1.variable(m)
    w = root_of_unity(m + 1)
    rest = [u * w ** j for j in range(1, m + 1)]
    return complex(G(u, rest, lambda x: x.exp()).derivative(m) / math.factorial(m))


def monomial_symmetric(mu: tuple[int, ...], xs) -> complex:
    """m_mu(xs): sum over distinct rearrangements of x^mu."""
    n = len(xs)
    exps = list(mu) + [0] * (n - len(mu))
    total = 0j
    for perm in set(itertools.permutations(exps)):
        term = 1 + 0j
        for x, e in zip(xs, perm):
            term *= x ** e
        total += term
    return total


def partitions(n: int, max_part: int | None = None, max_len: int | None = None):
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first, None if max_len is None else max_len - 1):
            yield (first,) + rest


@dataclass
class LemmaReport:
    sym_max_rel_error: float = 0.0
    sym_cases: int = 0
    roots_max_abs: float = 0.0
    roots_cases: int = 0
    eigen_failures: list = field(default_factory=list)
    eigen_cases: int = 0

    @property
    def passed(self) -> bool:
        return (self.sym_max_rel_error < 1e-5 and self.roots_max_abs < 1e-10
                and not self.eigen_failures)


def symmetrization_check(n_random: int = 50, m_max: int = 5, seed: int = 0) -> tuple[float, int]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    cases = 0
    for t in range(n_random):
        m = 1 + t % m_max
        G = RandomG.draw(rng)
        xi = [mpmath.mpc(*rng.normal(size=2)) for _ in range(m + 1)]
        lhs = sym_lhs_limit(G, m, xi)
        rhs = sym_rhs(G, m)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-12))
        cases += 1
    return worst, cases


def roots_vanishing_check(n_random: int = 100, m_max: int = 7, seed: int = 1) -> tuple[float, int]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(n_random):
        m = 2 + t % (m_max - 1)
        w = root_of_unity(m)
        xs = [w ** j for j in range(m)]
        val = 0j
        for deg in range(1, m):
            for mu in partitions(deg, max_len=m):
                if rng.random() < 0.7:
                    val += complex(rng.normal(), rng.normal()) * monomial_symmetric(mu, xs)
        worst = max(worst, abs(val))
    return worst, n_random


def eigen_check(k_max: int = 2) -> tuple[list, int]:
    failures = []
    cases = 0
    for N in (1, 2, 3):
        for lam in itertools.product(range(3), repeat=N):
            if list(lam) != sorted(lam, reverse=True):
                continue
            for k in range(1, k_max + 1):
                cases += 1
                if not dk_eigenrelation_check(lam, k):
                    failures.append((lam, k))
    return failures, cases


def lemma_property_tests(seed: int = 0) -> LemmaReport:
    rep = LemmaReport()
    rep.sym_max_rel_error, rep.sym_cases = symmetrization_check(seed=seed)
    rep.roots_max_abs, rep.roots_cases = roots_vanishing_check(seed=seed + 1)
    rep.eigen_failures, rep.eigen_cases = eigen_check()
    return rep
