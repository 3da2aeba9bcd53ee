"""Limit covariances of the moments p_k.

Fixed regime (environment law independent of M), scale N^(k+l+1):

    (1/2 pi i)^2 oint oint A(z)^k A(w)^l  a G(1+z, 1+w) dz dw,
    A(z) = 1/z + 1 + (1+z) a F(1+z),

with F(x) = E[b/(1-b+bx)] and G the covariance of the same resolvent.  The
factor a on F and G is what the general jet formula specializes to; the
variant without it is available with ``literal=True``.

Critical regime (b = beta +- sigma/sqrt(M)), scale M^(k1+k2), two levels
alpha1 <= alpha2:

    alpha1^k1 alpha2^k2 (1/2 pi i)^2 oint oint B1(z)^k1 B2(w)^k2
        ((1-alpha2) sigma^2 / ((1+beta z)^2 (1+beta w)^2) + 1/(z-w)^2) dz dw,
    B_i(z) = 1/z + 1 + (1+z) (1-alpha_i) beta / (alpha_i (1 + beta z)),

integrated over |z| = eps inside |w| = 2 eps.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..jets import Jet
from .lln import Family, schur_family
from .params import ModelParams, assert_real, root_of_unity

FIXED_EPS = 0.1
CRITICAL_EPS = 0.05
NODES = 256


def _circle(r: float, n: int):
    e = np.exp(2j * np.pi * np.arange(n) / n)
    return r * e, r * e / n  # points, weights for (1/2 pi i) oint f dz


# ----------------------------------------------------------- fixed regime


def clt_cov_fixed(k: int, l: int, p: ModelParams, literal: bool = False,
                  eps: float = FIXED_EPS, nodes: int = NODES) -> float:
    if k < 1 or l < 1:
        raise ValueError("k, l >= 1")
    c = 1.0 if literal else p.a
    b = p.dist.b[:, None]

    def side(r, power):
        z, wt = _circle(r, nodes)
        g = b / (1 + b * z[None, :])  # b / (1 - b + b (1+z)), one row per node
        F = p.dist.p @ g
        A = 1 / z + 1 + (1 + z) * c * F
        return (g * A ** power) @ wt  # per-node integrals

    Iz = side(eps, k)
    Iw = side(2 * eps, l)
    pz = p.dist.p
    val = c * (np.dot(pz, Iz * Iw) - np.dot(pz, Iz) * np.dot(pz, Iw))
    return assert_real(complex(val), 1e-9, "clt_cov_fixed")


def clt_cov_general(k: int, l: int, family: Family, tol: float = 1e-9) -> float:
    """Double sum over (q, r) of mixed derivatives of
    (d1 d2 F_{q+r+2} - d1 F_{q+1} d2 F_{r+1}) (1+x1)^k (d1 F_{q+1})^{k-1-q}
    (1+x2)^l (d2 F_{r+1})^{l-1-r}, with the F arguments at roots of unity."""
    if k < 1 or l < 1:
        raise ValueError("k, l >= 1")
    total = 0j
    for q in range(k):
        for r in range(l):
            orders = (q, r, 1, 1)
            x1, x2, e1, e2 = (Jet.variable(i, orders) for i in range(4))
            wq, wr = root_of_unity(q + 1), root_of_unity(r + 1)
            roots1 = [1 + x1 * wq ** j for j in range(1, q + 1)]
            roots2 = [1 + x2 * wr ** j for j in range(1, r + 1)]
            big = family([1 + x1 + e1, 1 + x2 + e2] + roots1 + roots2)
            d12 = Jet(big.c[:, :, 1:2, 1:2])
            d1 = Jet(family([1 + x1 + e1] + roots1).c[:, :, 1:2, 0:1])
            d2 = Jet(family([1 + x2 + e2] + roots2).c[:, :, 0:1, 1:2])
            xx1 = Jet(x1.c[:, :, 0:1, 0:1])
            xx2 = Jet(x2.c[:, :, 0:1, 0:1])
            expr = (d12 - d1 * d2) * (1 + xx1) ** k * d1 ** (k - 1 - q) \
                * (1 + xx2) ** l * d2 ** (l - 1 - r)
            coef = k * l / (math.factorial(q + 1) * math.factorial(r + 1)) \
                * math.comb(l - 1, r) * math.comb(k - 1, q)
            total += coef * expr.partial((q, r, 0, 0))
    return assert_real(total, tol, "clt_cov_general")


def clt_cov_general_schur(k: int, l: int, p: ModelParams) -> float:
    return clt_cov_general(k, l, schur_family(p.dist, p.a))


# -------------------------------------------------------- critical regime


def _order_levels(k1, k2, alpha1, alpha2):
    if alpha1 <= alpha2:
        return k1, k2, alpha1, alpha2
    return k2, k1, alpha2, alpha1


def clt_cov_critical(k1: int, k2: int, alpha1: float, alpha2: float, beta: float,
                     sigma: float, eps: float = CRITICAL_EPS, nodes: int = NODES) -> float:
    """Cov(p_k1 at alpha1, p_k2 at alpha2) / M^(k1+k2).  The smaller alpha goes
    on the inner contour, so the value is symmetric in the two levels."""
    k1, k2, alpha1, alpha2 = _order_levels(k1, k2, alpha1, alpha2)
    if not 0 < alpha1 <= alpha2 < 1:
        raise ValueError("need 0 < alpha1 <= alpha2 < 1")
    z, wz = _circle(eps, nodes)
    w, ww = _circle(2 * eps, nodes)

    def bracket(x, al):
        return 1 / x + 1 + (1 + x) * (1 - al) * beta / (al * (1 - beta + beta * (x + 1)))

    Bz = bracket(z, alpha1) ** k1 * wz
    Bw = bracket(w, alpha2) ** k2 * ww
    env = (1 - alpha2) * sigma ** 2 * np.dot(Bz, 1 / (1 + beta * z) ** 2) \
        * np.dot(Bw, 1 / (1 + beta * w) ** 2)
    gff = Bz @ (1 / (z[:, None] - w[None, :]) ** 2) @ Bw
    val = alpha1 ** k1 * alpha2 ** k2 * (env + gff)
    return assert_real(complex(val), 1e-9, "clt_cov_critical")


def bg2_covariance(k1: int, k2: int, F1: Callable, F2: Callable, G: Callable | None,
                   gff: bool = True, eps: float = CRITICAL_EPS, nodes: int = NODES) -> float:
    """Generic double contour integral
    oint oint (1/z+1+(1+z)F1(1+z))^k1 (1/w+1+(1+w)F2(1+w))^k2
              (1/(z-w)^2 [if gff] + G(1+z, 1+w)) dz dw / (2 pi i)^2
    with callables evaluated on arrays."""
    z, wz = _circle(eps, nodes)
    w, ww = _circle(2 * eps, nodes)
    Az = (1 / z + 1 + (1 + z) * F1(1 + z)) ** k1 * wz
    Aw = (1 / w + 1 + (1 + w) * F2(1 + w)) ** k2 * ww
    K = np.zeros((nodes, nodes), dtype=complex)
    if gff:
        K += 1 / (z[:, None] - w[None, :]) ** 2
    if G is not None:
        K += G((1 + z)[:, None], (1 + w)[None, :])
    return assert_real(complex(Az @ K @ Aw), 1e-9, "bg2_covariance")


def clt_cov_critical_bg2(k1, k2, alpha1, alpha2, beta, sigma) -> float:
    """The same limit through the generic integrator: F_i(x) = a_i beta/(1-beta+beta x),
    G(x, y) = (1-alpha2) sigma^2 / ((1-beta+beta x)^2 (1-beta+beta y)^2), times
    the level prefactors alpha1^k1 alpha2^k2."""
    k1, k2, alpha1, alpha2 = _order_levels(k1, k2, alpha1, alpha2)
    a1, a2 = 1 / alpha1 - 1, 1 / alpha2 - 1
    F1 = lambda x: a1 * beta / (1 - beta + beta * x)  # noqa: E731
    F2 = lambda x: a2 * beta / (1 - beta + beta * x)  # noqa: E731
    G = None
    if sigma:
        G = lambda x, y: (1 - alpha2) * sigma ** 2 / (  # noqa: E731
            (1 - beta + beta * x) ** 2 * (1 - beta + beta * y) ** 2)
    return alpha1 ** k1 * alpha2 ** k2 * bg2_covariance(k1, k2, F1, F2, G)


# ------------------------------------------------------------ closed forms


def fixed_k1_closed(p: ModelParams) -> float:
    """k = l = 1 in the fixed regime: a Var(b)."""
    return p.a * p.dist.variance()


def critical_k1_closed(alpha1: float, alpha2: float, beta: float, sigma: float) -> float:
    """k1 = k2 = 1: alpha1 alpha2 (1-alpha2) sigma^2 + alpha1 (1-alpha2) beta (1-beta)
    for alpha1 <= alpha2 (residues at z = w = 0)."""
    a1, a2 = min(alpha1, alpha2), max(alpha1, alpha2)
    return a1 * a2 * (1 - a2) * sigma ** 2 + a1 * (1 - a2) * beta * (1 - beta)
