"""Limit moments of the empirical measure m[rho_N].

Three routes to the same numbers:

* the contour integral of F(z)^(k+1) / z around z = 1, with
  F(z) = z/(z-1) + a z E[b / (1 - b + b z)];
* the general double sum over derivatives of d_1 F_{l+1} evaluated at roots
  of unity, for any family F_k of symmetric functions (jets carry the
  derivatives; d_1 is an auxiliary order-one direction);
* the factorized special case F_k = exp(sum_i f(u_i)), which only needs f'.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from ..environment import WeightDistribution, expect_resolvent
from ..jets import Jet, Jet1
from .params import LLN_CONTOUR, ContourSpec, ModelParams, assert_real, root_of_unity

Family = Callable[[Sequence[Jet]], Jet]


def curly_F(z, p: ModelParams):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z - 1) < 1e-12):
        raise ValueError("curly_F has a pole at z = 1")
    out = z / (z - 1) + p.a * z * expect_resolvent(p.dist, z)
    return complex(out) if out.ndim == 0 else out


def lln_moment_contour(k: int, p: ModelParams, contour: ContourSpec = LLN_CONTOUR) -> float:
    if k < 1:
        raise ValueError("k >= 1")
    val = contour.integrate(lambda z: curly_F(z, p) ** (k + 1) / z) / (k + 1)
    return assert_real(val, 1e-10, "lln_moment_contour")


# ------------------------------------------------------------------ families


def schur_family(dist: WeightDistribution, a: float) -> Family:
    """F_k(u_1..u_k) = (E prod_i (1 - b + u_i b))^a, the limit of the N-th
    root of the annealed Schur generating function."""

    def F(args: Sequence[Jet]) -> Jet:
        orders = args[0].orders
        B = Jet.constant(dist.b, orders)
        prod = 1 - B + B * args[0]
        for x in args[1:]:
            prod = prod * (1 - B + B * x)
        inner = prod.mean(dist.p)
        if a == 0:
            return Jet.constant(1.0, orders)
        return inner.pow_real(a)

    return F


def factorized_family(f: Callable[[Jet], Jet]) -> Family:
    """F_k = exp(f(u_1) + ... + f(u_k))."""

    def F(args: Sequence[Jet]) -> Jet:
        s = f(args[0])
        for x in args[1:]:
            s = s + f(x)
        return s.exp()

    return F


def d1_at_roots(family: Family, l: int, L: int, shift: Callable[[Jet], Jet] | None = None) -> Jet1:
    """u -> d_1 F_{l+1}(1 + s, 1 + s w, ..., 1 + s w^l) as a jet of order L in u,
    where s = shift(u) (default s = u) and w = exp(2 pi i / (l + 1))."""
    orders = (L, 1)
    u = Jet.variable(0, orders)
    e = Jet.variable(1, orders)
    s = u if shift is None else shift(u)
    w = root_of_unity(l + 1)
    args = [1 + s + e] + [1 + s * w ** j for j in range(1, l + 1)]
    F = family(args)
    return Jet1(F.c[:, 1])


def lln_moment_general(k: int, family: Family, tol: float = 1e-9) -> float:
    """sum_l C(k,l)/(l+1)! d_u^l [(1+u)^k (d_1 F_{l+1}(1+u, 1+u w, ...))^(k-l)] at u = 0."""
    if k < 1:
        raise ValueError("k >= 1")
    total = 0j
    for l in range(k + 1):
        u = Jet1.variable(l)
        g = (1 + u) ** k
        if k - l:
            g = g * d1_at_roots(family, l, l) ** (k - l)
        total += math.comb(k, l) / math.factorial(l + 1) * g.derivative(l)
    return assert_real(total, tol, "lln_moment_general")


def lln_moment_factorized(k: int, fprime: Callable[[Jet1], Jet1]) -> float:
    """sum_l C(k,l)/(l+1)! d_u^l [(1+u)^k f'(1+u)^(k-l)] at u = 0."""
    total = 0j
    for l in range(k + 1):
        u = Jet1.variable(l)
        g = (1 + u) ** k
        if k - l:
            g = g * fprime(1 + u) ** (k - l)
        total += math.comb(k, l) / math.factorial(l + 1) * g.derivative(l)
    return assert_real(total, 1e-12, "lln_moment_factorized")


def resolvent_jet(dist: WeightDistribution, x: Jet) -> Jet:
    """E[b / (1 - b + b x)] for a jet argument."""
    B = Jet.constant(dist.b, x.orders)
    return (B / (1 - B + B * x)).mean(dist.p)


def lln_moment_resolvent(k: int, p: ModelParams) -> float:
    """Factorized route with f'(x) = a E[b / (1 - b + b x)]."""
    return lln_moment_factorized(k, lambda x: p.a * resolvent_jet(p.dist, x))


def lln_moment(k: int, p: ModelParams, method: str = "contour") -> float:
    if method == "contour":
        return lln_moment_contour(k, p)
    if method == "general":
        return lln_moment_general(k, schur_family(p.dist, p.a))
    if method == "resolvent":
        return lln_moment_resolvent(k, p)
    raise ValueError(f"unknown method {method!r}")
