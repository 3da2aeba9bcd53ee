"""Limit shape and arctic curve.

At a point (alpha, y) of the unit square, with a = 1/alpha - 1, solve
F(z; a) = y / alpha.  Inside the liquid region there is a root in the upper
half-plane and the density is Arg(z) / pi.  In a frozen region every root is
real; the density there is the limit of Arg(z) / pi at the nearest point of
the arctic curve on the same alpha-slice, i.e. 1 if the double root there is
negative and 0 if it is positive.

The arctic curve is the double-root locus.  F'(z; a) = 0 is linear in a:
a(z) = 1 / ((z-1)^2 H'(z)) with H'(z) = E[b(1-b) / (1-b+bz)^2] > 0 on the
real axis, and then alpha = 1/(1 + a(z)), y = alpha F(z; a(z)).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..environment import WeightDistribution

NEWTON_MAX_ITER = 100
RESIDUAL_TOL = 1e-10
REAL_TOL = 1e-8
SEEDS = (1j, 0.5 + 0.5j, 2j)


class LimitShapeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LimitShapePoint:
    alpha: float
    y: float
    z: complex
    density: float
    frozen: bool
    residual: float
    n_upper_roots: int = 1


# ------------------------------------------------------------ F and friends


def _F(z, a, dist: WeightDistribution):
    """F(z; a) and dF/dz, vectorized over z (and broadcast a)."""
    b = dist.b[:, None]
    zz = np.ravel(z)[None, :]
    den = 1 - b + b * zz
    H = np.dot(dist.p, b / den)
    dH = np.dot(dist.p, b * (1 - b) / den ** 2)
    zf = np.ravel(z)
    a = np.ravel(np.broadcast_to(a, np.shape(z)))
    f = zf / (zf - 1) + a * zf * H
    df = -1 / (zf - 1) ** 2 + a * dH
    return f.reshape(np.shape(z)), df.reshape(np.shape(z))


def _Hprime(z, dist: WeightDistribution):
    b = dist.b[:, None]
    den = 1 - b + b * np.ravel(z)[None, :]
    return np.dot(dist.p, b * (1 - b) / den ** 2).reshape(np.shape(z))


def a_of_z(z, dist: WeightDistribution):
    z = np.asarray(z, dtype=float)
    return 1.0 / ((z - 1) ** 2 * _Hprime(z, dist))


def poles(dist: WeightDistribution) -> np.ndarray:
    return np.sort(-(1 - dist.b) / dist.b)


# ------------------------------------------------------------ Newton solver


def _newton(z0, a, target, dist):
    """Damped Newton on F(z) - target, vectorized over the points still moving.
    Returns (z, residual)."""
    z = np.array(z0, dtype=complex)
    a = np.broadcast_to(np.asarray(a, dtype=float), z.shape).copy()
    target = np.broadcast_to(np.asarray(target, dtype=float), z.shape)
    f, df = _F(z, a, dist)
    r = np.abs(f - target)
    r[~np.isfinite(r)] = np.inf
    scale = np.ones(z.shape)
    idx = np.nonzero(r > RESIDUAL_TOL * 1e-3)[0]
    for _ in range(NEWTON_MAX_ITER):
        if len(idx) == 0:
            break
        with np.errstate(all="ignore"):
            dz = (f[idx] - target[idx]) / df[idx]
        dz = np.where(np.isfinite(dz), dz, 0.1j)
        cand = z[idx] - scale[idx] * dz
        fc, dfc = _F(cand, a[idx], dist)
        rc = np.abs(fc - target[idx])
        upd = np.isfinite(rc) & (rc < r[idx])
        j = idx[upd]
        z[j], f[j], df[j], r[j] = cand[upd], fc[upd], dfc[upd], rc[upd]
        sc = np.where(upd, np.minimum(1.0, scale[idx] * 2), scale[idx] / 2)
        scale[idx] = np.where(sc < 1e-12, 1.0, sc)  # restart damping
        idx = idx[r[idx] > RESIDUAL_TOL * 1e-3]
    return z, r


def _solve_upper(alpha, y, dist):
    """Best root in the closed upper half-plane from all seeds, vectorized."""
    alpha = np.asarray(alpha, dtype=float)
    y = np.asarray(y, dtype=float)
    a = 1 / alpha - 1
    target = y / alpha
    best_z = np.full(alpha.shape, np.nan + 0j)
    best_r = np.full(alpha.shape, np.inf)
    n_upper = np.zeros(alpha.shape, dtype=int)
    found = []
    for s in SEEDS:
        z, r = _newton(np.full(alpha.shape, s), a, target, dist)
        z = np.where(z.imag < 0, np.conj(z), z)  # F has real coefficients
        ok = r < RESIDUAL_TOL
        upper = ok & (z.imag > REAL_TOL)
        prefer = ok & ((upper & ~(best_z.imag > REAL_TOL)) | (r < best_r) & ~(
            (best_z.imag > REAL_TOL) & ~upper))
        best_z = np.where(prefer, z, best_z)
        best_r = np.where(prefer, r, best_r)
        found.append(np.where(upper, z, np.nan))
    # count distinct upper roots found across seeds
    F = np.stack(found)
    for i in range(len(SEEDS)):
        distinct = np.isfinite(F[i])
        for j in range(i):
            distinct &= ~(np.abs(F[i] - F[j]) < 1e-6)
        n_upper += distinct
    return best_z, best_r, n_upper


def _grid_fallback(alpha, y, dist):
    """Coarse search of |F - target| over the upper half-plane, then Newton."""
    a = 1 / alpha - 1
    target = y / alpha
    re = np.linspace(-6, 6, 241)
    im = np.geomspace(1e-3, 6, 120)
    Z = (re[None, :] + 1j * im[:, None]).ravel()
    with np.errstate(all="ignore"):
        f, _ = _F(Z, np.full(Z.shape, a), dist)
    k = np.nanargmin(np.abs(f - target))
    z, r = _newton(np.array([Z[k]]), np.array([a]), np.array([target]), dist)
    return z[0], r[0]


# ------------------------------------------------------ frozen classification


def boundary_points(alpha: float, dist: WeightDistribution, samples: int = 400):
    """Double roots on the slice: real z with a(z) = 1/alpha - 1, and their y."""
    a = 1 / alpha - 1
    if a <= 0:
        return np.array([]), np.array([])
    sing = np.concatenate([poles(dist), [1.0]])
    roots = []
    g = lambda z: np.log(a_of_z(z, dist)) - np.log(a)  # noqa: E731
    t = 0.5 * (1 - np.cos(np.linspace(0, np.pi, samples)))[1:-1]
    segs = [(sing[i], sing[i + 1]) for i in range(len(sing) - 1)]
    intervals = [lo + (hi - lo) * t for lo, hi in segs]
    # the two unbounded pieces, sampled geometrically as in arctic_curve
    s = np.geomspace(1e-10, 1e12, samples)
    intervals.append(1 + s)
    intervals.append(sing[0] - s[::-1])
    for zs in intervals:
        with np.errstate(all="ignore"):
            v = g(zs)
        good = np.isfinite(v)
        zs, v = zs[good], v[good]
        idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
        for i in idx:
            roots.append(brentq(g, zs[i], zs[i + 1], xtol=1e-14, rtol=1e-14, maxiter=200))
        exact = np.nonzero(v == 0)[0]
        roots += [float(zs[i]) for i in exact]
    roots = np.array(sorted(roots))
    if len(roots) == 0:
        return roots, roots
    f, _ = _F(roots.astype(complex), np.full(len(roots), a), dist)
    return roots, alpha * f.real


def _frozen_density(alpha, y, z_real, dist, cache):
    key = float(alpha)
    if key not in cache:
        cache[key] = boundary_points(alpha, dist)
    zb, yb = cache[key]
    if len(zb):
        k = int(np.argmin(np.abs(yb - y)))
        return 1.0 if zb[k] < 0 else 0.0
    return 1.0 if z_real < 0 else 0.0


# -------------------------------------------------------------- public API


def limit_shape_density(alpha: float, y: float, dist: WeightDistribution) -> LimitShapePoint:
    return limit_shape_grid(np.array([alpha]), np.array([y]), dist)[0]


def limit_shape_grid(alphas, ys, dist: WeightDistribution) -> list[LimitShapePoint]:
    """Evaluate at the paired points (alphas[i], ys[i])."""
    alphas = np.asarray(alphas, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any((alphas <= 0) | (alphas >= 1) | (ys <= 0) | (ys >= 1)):
        raise ValueError("alpha and y must lie in (0, 1)")
    z, r, n_up = _solve_upper(alphas, ys, dist)
    bad = ~(r < RESIDUAL_TOL)
    for i in np.nonzero(bad)[0]:
        zi, ri = _grid_fallback(alphas[i], ys[i], dist)
        if ri < RESIDUAL_TOL:
            z[i], r[i] = (np.conj(zi) if zi.imag < 0 else zi), ri
        else:
            raise LimitShapeError(
                f"no root at alpha={alphas[i]}, y={ys[i]}: best residual {min(r[i], ri):.3e}")
    cache: dict = {}
    out = []
    for i in range(len(alphas)):
        zi = complex(z[i])
        frozen = abs(zi.imag) < REAL_TOL
        if frozen:
            dens = _frozen_density(alphas[i], ys[i], zi.real, dist, cache)
        else:
            dens = float(np.angle(zi) / np.pi)
        out.append(LimitShapePoint(float(alphas[i]), float(ys[i]), zi, dens, frozen,
                                   float(r[i]), int(n_up[i])))
    return out


def density_grid(n: int, dist: WeightDistribution):
    """n x n cell-centred grid; returns (alphas, ys, points) with row = y index."""
    c = (np.arange(n) + 0.5) / n
    A, Y = np.meshgrid(c, c)
    pts = limit_shape_grid(A.ravel(), Y.ravel(), dist)
    return c, c, pts


def arctic_curve(dist: WeightDistribution, n_points: int = 2000) -> np.ndarray:
    """Points (alpha, y, z) of the double-root locus, sorted by alpha.

    The real line minus the singularities {poles, 1} is split into pieces,
    each sampled with end-clustered spacing; nodes where a(z) is not
    positive and finite are skipped."""
    if n_points < 2:
        raise ValueError("n_points >= 2")
    sing = np.concatenate([poles(dist), [1.0]])
    pieces = len(sing) + 1
    m = max(2, n_points // pieces)
    t = 0.5 * (1 - np.cos(np.linspace(0, np.pi, m + 2)))[1:-1]
    zs = [lo + (hi - lo) * t for lo, hi in zip(sing[:-1], sing[1:])]
    s = np.geomspace(1e-8, 1e9, max(m, 200))
    zs.append(1 + s)
    zs.append(sing[0] - s)
    z = np.concatenate(zs + [np.array([0.0])])
    z = z[np.isfinite(z)]
    with np.errstate(all="ignore"):
        a = a_of_z(z, dist)
    keep = np.isfinite(a) & (a > 0)
    z, a = z[keep], a[keep]
    alpha = 1 / (1 + a)
    f, _ = _F(z.astype(complex), a, dist)
    y = alpha * f.real
    order = np.argsort(alpha, kind="stable")
    return np.column_stack([alpha[order], y[order], z[order]])
