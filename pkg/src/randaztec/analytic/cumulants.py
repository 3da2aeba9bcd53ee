"""Free cumulants of the limit measure and the non-crossing moment recursion."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from ..jets import Jet1
from .lln import Family, d1_at_roots, schur_family
from .params import ModelParams, assert_real

MAX_CUMULANT = 8


@lru_cache(maxsize=None)
def bernoulli_plus(n_max: int) -> tuple[Fraction, ...]:
    """B_0..B_{n_max} with B_1 = +1/2, from sum_{j<=n} C(n+1, j) B_j = n + 1."""
    B: list[Fraction] = []
    for n in range(n_max + 1):
        s = sum(math.comb(n + 1, j) * B[j] for j in range(n))
        B.append((Fraction(n + 1) - s) / (n + 1))
    return tuple(B)


def pole_free_part(L: int) -> Jet1:
    """e^v/(e^v - 1) - 1/v = sum_{n>=1} B_n v^(n-1) / n!, as a jet of order L."""
    B = bernoulli_plus(L + 1)
    return Jet1([float(B[n] / math.factorial(n)) for n in range(1, L + 2)])


def _kernel(family: Family, k: int, L: int) -> Jet1:
    """e^v/(e^v-1) - 1/v + e^v d_1 F_{k+1}(e^v, 1 + w (e^v - 1), ...), jet in v."""
    v = Jet1.variable(L)
    ev = v.exp()
    d1 = d1_at_roots(family, k, L, shift=lambda u: u.exp() - 1)
    return pole_free_part(L) + ev * d1


def free_cumulants_family(k_max: int, family: Family) -> list[float]:
    if not 1 <= k_max <= MAX_CUMULANT:
        raise ValueError(f"k_max must lie in 1..{MAX_CUMULANT}")
    out = []
    for k in range(1, k_max + 1):
        g = _kernel(family, k, k - 1)
        out.append(assert_real(g.derivative(k - 1) / math.factorial(k - 1), 1e-9, "free cumulant"))
    return out


def free_cumulants(k_max: int, p: ModelParams) -> list[float]:
    return free_cumulants_family(k_max, schur_family(p.dist, p.a))


def moments_from_cumulants_via_kernel(k_max: int, p: ModelParams) -> list[float]:
    """The moment formula written with F_{k+1} only, expanded in v."""
    fam = schur_family(p.dist, p.a)
    out = []
    for k in range(1, k_max + 1):
        g = _kernel(fam, k, k)
        tot = 0j
        for l in range(k + 1):
            tot += math.comb(k, l) / math.factorial(l + 1) * (g ** (k - l)).derivative(l)
        out.append(assert_real(tot, 1e-9, "kernel moment"))
    return out


def moments_from_free_cumulants(c: list[float]) -> list[float]:
    """m_n = sum over non-crossing partitions of prod c_|block|, via the
    first-block recursion m_n = sum_s c_s sum_{i_1+..+i_s = n-s} prod m_{i_j}."""
    n_max = len(c)
    m = [1.0] + [0.0] * n_max
    for n in range(1, n_max + 1):
        total = 0.0
        for s in range(1, n + 1):
            total += c[s - 1] * _power_coeff(m, s, n - s)
        m[n] = total
    return m[1:]


def _power_coeff(m: list[float], s: int, j: int) -> float:
    """[x^j] (sum_{i<=j} m_i x^i)^s."""
    poly = [1.0] + [0.0] * j
    base = m[: j + 1]
    for _ in range(s):
        new = [0.0] * (j + 1)
        for i, a in enumerate(poly):
            if a:
                for t in range(j + 1 - i):
                    new[i + t] += a * base[t]
        poly = new
    return poly[j]


def free_cumulants_from_moments(m: list[float]) -> list[float]:
    """Inverse of :func:`moments_from_free_cumulants` (triangular solve)."""
    c: list[float] = []
    for n in range(1, len(m) + 1):
        c.append(0.0)
        c[-1] = m[n - 1] - moments_from_free_cumulants(c)[n - 1]
    return c
