"""Exact expectations of p_k at finite N.

For a Schur generating function of product form prod_i exp(psi(x_i)) one has

    E[p_k] = sum_{m=0}^{N-1} [y^m] (D + c(y))^k y^m,

where x = 1 + y, D = x d/dx = (1 + y) d/dy and c(y) = x psi'(x).  For the
level-N marginal c = sum_{j>N} (1+y) b_j / (1 + b_j y), so the k-fold
operator is a polynomial in c and its y-derivatives.  It is expanded
symbolically, keeping the c-factors as a multiset of derivative orders, and
only at the end replaced by products of actual series (quenched) or by their
expectations over i.i.d. b_j (annealed: a sum over set partitions with
falling-factorial multiplicities).
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..environment import WeightDistribution


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _mul(a: np.ndarray, b: np.ndarray, L: int) -> np.ndarray:
    """Truncated product of series along the last axis (length L+1)."""
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for i in range(L + 1):
        ai = a[..., i:i + 1]
        out[..., i:] += ai * b[..., : L + 1 - i]
    return out


def _g_series(b: np.ndarray, L: int, deriv: int) -> np.ndarray:
    """Taylor coefficients in y of d^deriv/dy^deriv [(1+y) b / (1 + b y)], per b."""
    b = np.asarray(b, dtype=float)[:, None]
    n = np.arange(L + 1 + deriv)[None, :]
    g = np.where(n == 0, b, b * (1 - b) * (-b) ** np.maximum(n - 1, 0))
    if deriv:
        idx = np.arange(L + 1)
        fall = np.ones(L + 1)
        for t in range(1, deriv + 1):
            fall *= idx + t
        return g[:, deriv:] * fall[None, :]
    return g


def _expand(k: int, N: int, L: int) -> dict:
    """(D + c)^k y^m for all m < N as {multiset of c-derivative orders: series rows}."""
    P0 = np.zeros((N, L + 1))
    P0[np.arange(N), np.arange(N)] = 1.0
    state = {(): P0}
    onepy = np.zeros(L + 1)
    onepy[0] = onepy[1] = 1.0
    for _ in range(k):
        new: dict = {}

        def add(key, val):
            key = tuple(sorted(key))
            new[key] = new[key] + val if key in new else val

        for key, P in state.items():
            dP = np.zeros_like(P)
            dP[:, :-1] = P[:, 1:] * np.arange(1, L + 1)
            add(key, _mul(dP, onepy, L))
            for s in range(len(key)):
                bumped = list(key)
                bumped[s] += 1
                add(tuple(bumped), _mul(P, onepy, L))
            add(key + (0,), P)
        state = new
    return state


def _falling(n: int, q: int) -> float:
    out = 1.0
    for i in range(q):
        out *= n - i
    return out


def _c_product_quenched(key, betas, L):
    out = np.zeros(L + 1)
    out[0] = 1.0
    for d in key:
        out = _mul(out, _g_series(betas, L, d).sum(axis=0), L)
    return out


def _c_product_annealed(key, dist: WeightDistribution, n: int, L: int):
    out = np.zeros(L + 1)
    for part in _set_partitions(list(range(len(key)))):
        term = np.zeros(L + 1)
        term[0] = _falling(n, len(part))
        if term[0] == 0:
            continue
        for block in part:
            prod = np.zeros((len(dist.b), L + 1))
            prod[:, 0] = 1.0
            for s in block:
                prod = _mul(prod, _g_series(dist.b, L, key[s]), L)
            term = _mul(term, dist.p @ prod, L)
        out += term
    return out


def _mean_pk(k: int, N: int, cprod) -> float:
    L = N - 1 + k
    total = 0.0
    for key, P in _expand(k, N, L).items():
        C = cprod(key, L)
        full = _mul(P, C[None, :], L)
        total += float(np.trace(full[:, :N]))
    return total


def exact_mean_pk_quenched(k: int, N: int, betas: Sequence[float]) -> float:
    """E[p_k(lam^(N))] for fixed parameters beta_1..beta_M."""
    tail = np.asarray(betas[N:], dtype=float)
    return _mean_pk(k, N, lambda key, L: _c_product_quenched(key, tail, L))


def exact_mean_pk_annealed(k: int, N: int, M: int, dist: WeightDistribution) -> float:
    """E[p_k(lam^(N))] averaged over i.i.d. b_j ~ dist."""
    return _mean_pk(k, N, lambda key, L: _c_product_annealed(key, dist, M - N, L))


def exact_var_p1_annealed(N: int, M: int, dist: WeightDistribution) -> float:
    """Var(p_1) = N (M-N) E[b(1-b)] + N^2 (M-N) Var(b): given the environment
    |lam^(N)| is a sum of independent Binomial(N, b_j), j > N."""
    eb1b = float(np.dot(dist.p, dist.b * (1 - dist.b)))
    return N * (M - N) * eb1b + N * N * (M - N) * dist.variance()


def exact_cov_p1_two_levels(N1: int, N2: int, M: int, dist: WeightDistribution) -> float:
    """Cov(p_1(lam^(N1)), p_1(lam^(N2))), annealed:
    min(N) (M - max(N)) E[b(1-b)] + N1 N2 (M - max(N)) Var(b)."""
    n1, n2 = min(N1, N2), max(N1, N2)
    eb1b = float(np.dot(dist.p, dist.b * (1 - dist.b)))
    return n1 * (M - n2) * eb1b + n1 * n2 * (M - n2) * dist.variance()
