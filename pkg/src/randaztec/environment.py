"""The environment law B: distributions of b = W / (1 + W), their
expectations, and i.i.d. sampling of environments.

Every distribution carries quadrature nodes ``(b_j, p_j)`` used by the
analytic formulas.  Point masses and atoms are exact; intervals use
Gauss-Legendre nodes (64 by default).  Sampling from an interval law draws
true continuous variates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .rng import env_generator

DEFAULT_NODES = 64
POLE_TOL = 1e-12


class EnvironmentError_(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WeightDistribution:
    kind: str  # point_mass | discrete | uniform
    on: str  # "b" or "w": the variable the user specified
    b: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)
    params: tuple = ()

    def __post_init__(self):
        if np.any(self.b <= 0) or np.any(self.b >= 1):
            raise EnvironmentError_("all b nodes must lie in (0, 1)")
        if np.any(self.p <= 0) or abs(self.p.sum() - 1) > 1e-14:
            raise EnvironmentError_("node weights must be positive and sum to 1")

    # -- expectations ------------------------------------------------
    def moment(self, k: int) -> float:
        if k < 0:
            raise ValueError("k >= 0")
        return float(np.dot(self.p, self.b ** k))

    def mean(self) -> float:
        return self.moment(1)

    def variance(self) -> float:
        m = self.mean()
        return float(np.dot(self.p, (self.b - m) ** 2))

    def expect(self, f) -> Any:
        """E[f(b)] for f vectorized over the node array (extra trailing axes ok)."""
        vals = f(self.b)
        return np.tensordot(self.p, vals, axes=(0, 0))

    def is_degenerate(self) -> bool:
        return len(self.b) == 1

    # -- sampling ----------------------------------------------------
    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "uniform":
            lo, hi = self.params
            x = rng.uniform(lo, hi, size=size)
            while np.any(x <= 0):  # open interval at 0
                bad = x <= 0
                x[bad] = rng.uniform(lo, hi, size=int(bad.sum()))
            return x / (1 + x) if self.on == "w" else x
        if len(self.b) == 1:
            return np.full(size, float(self.b[0]))
        idx = rng.choice(len(self.b), size=size, p=self.p)
        return self.b[idx]

    def with_nodes(self, n: int) -> "WeightDistribution":
        if self.kind != "uniform":
            return self
        lo, hi = self.params
        return uniform_w(lo, hi, n) if self.on == "w" else uniform_b(lo, hi, n)

    def to_json(self) -> dict:
        if self.kind == "point_mass":
            return {"kind": "point_mass", "b": float(self.b[0])}
        if self.kind == "discrete":
            vals = self.b if self.on == "b" else self.b / (1 - self.b)
            return {"kind": "discrete", "on": self.on,
                    "atoms": [[float(v), float(q)] for v, q in zip(vals, self.p)]}
        lo, hi = self.params
        return {"kind": "uniform", "on": self.on, "low": lo, "high": hi, "nodes": len(self.b)}

    def label(self) -> str:
        return _label(self.to_json())


def _label(obj: dict) -> str:
    k = obj["kind"]
    if k == "point_mass":
        return f"point:{obj['b']:g}"
    if k == "discrete":
        pre = "w-atoms" if obj.get("on", "b") == "w" else "atoms"
        return pre + ":" + ",".join(f"{v:g}@{q:g}" for v, q in obj["atoms"])
    if k == "uniform":
        return f"uniform-{obj.get('on', 'b')}:{obj['low']:g},{obj['high']:g}"
    if k == "critical":
        return f"critical:{obj['beta']:g},{obj['sigma']:g}"
    return k


def point_mass(b: float) -> WeightDistribution:
    return WeightDistribution("point_mass", "b", np.array([float(b)]), np.array([1.0]))


def discrete(atoms: Sequence[tuple[float, float]], on: str = "b") -> WeightDistribution:
    vals = np.array([float(a) for a, _ in atoms])
    probs = np.array([float(q) for _, q in atoms])
    if on == "w":
        if np.any(vals <= 0):
            raise EnvironmentError_("weights W must be positive")
        bs = vals / (1 + vals)
    elif on == "b":
        bs = vals
    else:
        raise ValueError("on must be 'b' or 'w'")
    probs = probs / probs.sum()
    if len(bs) == 1:
        return point_mass(bs[0])
    return WeightDistribution("discrete", on, bs, probs)


def _gauss_legendre(lo: float, hi: float, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * w


def uniform_w(lo: float, hi: float, nodes: int = DEFAULT_NODES) -> WeightDistribution:
    if not 0 <= lo < hi:
        raise EnvironmentError_("need 0 <= low < high for W")
    x, w = _gauss_legendre(lo, hi, nodes)
    return WeightDistribution("uniform", "w", x / (1 + x), w, (float(lo), float(hi)))


def uniform_b(lo: float, hi: float, nodes: int = DEFAULT_NODES) -> WeightDistribution:
    if not 0 <= lo < hi <= 1:
        raise EnvironmentError_("need 0 <= low < high <= 1 for b")
    x, w = _gauss_legendre(lo, hi, nodes)
    return WeightDistribution("uniform", "b", x, w, (float(lo), float(hi)))


# ------------------------------------------------------------ resolvents


def _check_poles(dist: WeightDistribution, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    den = 1 - dist.b[(slice(None),) + (None,) * z.ndim] * (1 - z)
    if np.any(np.abs(den) < POLE_TOL):
        raise EnvironmentError_("evaluation point too close to a resolvent pole")
    return den


def expect_resolvent(dist: WeightDistribution, z):
    """F(z) = E[b / (1 - b + b z)]; vectorized over z."""
    den = _check_poles(dist, z)
    bb = dist.b[(slice(None),) + (None,) * (den.ndim - 1)]
    out = np.tensordot(dist.p, bb / den, axes=(0, 0))
    return complex(out) if np.ndim(z) == 0 else out


def cov_resolvent(dist: WeightDistribution, z, w):
    """G(z, w) = Cov(b/(1-b+bz), b/(1-b+bw)); z and w broadcast together."""
    z, w = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
    dz = _check_poles(dist, z)
    dw = _check_poles(dist, w)
    bb = dist.b[(slice(None),) + (None,) * z.ndim]
    fz = bb / dz
    fw = bb / dw
    e_zw = np.tensordot(dist.p, fz * fw, axes=(0, 0))
    out = e_zw - np.tensordot(dist.p, fz, axes=(0, 0)) * np.tensordot(dist.p, fw, axes=(0, 0))
    return complex(out) if z.ndim == 0 else out


# --------------------------------------------------------------- regimes


@dataclass(frozen=True)
class FixedRegime:
    dist: WeightDistribution

    def at_size(self, M: int) -> WeightDistribution:
        return self.dist

    def limit(self) -> WeightDistribution:
        return self.dist

    def to_json(self) -> dict:
        return self.dist.to_json()

    def label(self) -> str:
        return self.dist.label()


@dataclass(frozen=True)
class CriticalRegime:
    """b = beta +- sigma / sqrt(M) with probability 1/2 each."""

    beta: float
    sigma: float

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise EnvironmentError_("beta must lie in (0, 1)")
        if self.sigma < 0:
            raise EnvironmentError_("sigma must be >= 0")

    def minimal_size(self) -> int:
        if self.sigma == 0:
            return 1
        r = self.sigma / min(self.beta, 1 - self.beta)
        return int(math.floor(r * r)) + 1

    def at_size(self, M: int) -> WeightDistribution:
        eps = self.sigma / math.sqrt(M)
        if eps >= min(self.beta, 1 - self.beta):
            raise EnvironmentError_(
                f"critical regime needs sigma/sqrt(M) < min(beta, 1-beta); "
                f"smallest admissible M is {self.minimal_size()}")
        if eps == 0:
            return point_mass(self.beta)
        return discrete([(self.beta - eps, 0.5), (self.beta + eps, 0.5)])

    def limit(self) -> WeightDistribution:
        return point_mass(self.beta)

    def to_json(self) -> dict:
        return {"kind": "critical", "beta": self.beta, "sigma": self.sigma}

    def label(self) -> str:
        return _label(self.to_json())


RegimeSpec = FixedRegime | CriticalRegime


@dataclass(frozen=True)
class EnvironmentSample:
    betas: np.ndarray
    weights: np.ndarray
    seed: int


def sample_environment(spec, M: int, master_seed: int) -> EnvironmentSample:
    """M i.i.d. draws of b; W = b / (1 - b).  Deterministic in (spec, M, seed)."""
    if isinstance(spec, WeightDistribution):
        spec = FixedRegime(spec)
    dist = spec.at_size(M)
    rng = env_generator(master_seed)
    betas = dist.sample(M, rng)
    return EnvironmentSample(betas, betas / (1 - betas), master_seed)


# ----------------------------------------------------------------- parsing


def dist_from_json(obj: dict):
    """Build a regime from its JSON form.  Point/discrete/uniform give a
    FixedRegime, "critical" a CriticalRegime."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise EnvironmentError_("environment spec must be an object with a 'kind'")
    kind = obj["kind"]
    allowed = {
        "point_mass": {"kind", "b"},
        "discrete": {"kind", "on", "atoms"},
        "uniform": {"kind", "on", "low", "high", "nodes"},
        "critical": {"kind", "beta", "sigma"},
    }
    if kind not in allowed:
        raise EnvironmentError_(f"unknown environment kind {kind!r}")
    extra = set(obj) - allowed[kind]
    if extra:
        raise EnvironmentError_(f"unknown keys for {kind}: {sorted(extra)}")
    try:
        if kind == "point_mass":
            return FixedRegime(point_mass(float(obj["b"])))
        if kind == "discrete":
            return FixedRegime(discrete([(float(a), float(q)) for a, q in obj["atoms"]],
                                        on=obj.get("on", "b")))
        if kind == "uniform":
            n = int(obj.get("nodes", DEFAULT_NODES))
            f = uniform_w if obj.get("on", "b") == "w" else uniform_b
            return FixedRegime(f(float(obj["low"]), float(obj["high"]), n))
        return CriticalRegime(float(obj["beta"]), float(obj["sigma"]))
    except KeyError as e:
        raise EnvironmentError_(f"missing key {e} in {kind} spec") from None


def parse_dist(text: str):
    """Short CLI form: ``point:0.5``, ``atoms:0.2@0.5,0.7@0.5``,
    ``w-atoms:0.5,5`` (equal weights when @p is omitted), ``uniform-w:0,2``,
    ``uniform-b:0.2,0.6``, ``critical:0.5,1``."""
    if ":" not in text:
        raise EnvironmentError_(f"cannot parse environment {text!r}")
    head, body = text.split(":", 1)
    nums = [s for s in body.split(",") if s]
    try:
        if head == "point":
            return FixedRegime(point_mass(float(body)))
        if head in ("atoms", "w-atoms"):
            pairs = []
            for s in nums:
                v, _, q = s.partition("@")
                pairs.append((float(v), float(q) if q else 1.0))
            return FixedRegime(discrete(pairs, on="w" if head == "w-atoms" else "b"))
        if head in ("uniform-w", "uniform-b"):
            lo, hi = map(float, nums)
            return FixedRegime(uniform_w(lo, hi) if head == "uniform-w" else uniform_b(lo, hi))
        if head == "critical":
            beta, sigma = map(float, nums)
            return CriticalRegime(beta, sigma)
    except ValueError as e:
        raise EnvironmentError_(f"cannot parse environment {text!r}: {e}") from None
    raise EnvironmentError_(f"unknown environment kind {head!r}")


# the four environments used throughout the checks
def standard_environments(critical_size: int = 16) -> dict[str, WeightDistribution]:
    return {
        "point_mass_half": point_mass(0.5),
        "bernoulli_w": discrete([(0.5, 0.5), (5.0, 0.5)], on="w"),
        "uniform_w_0_2": uniform_w(0.0, 2.0),
        "critical_two_point": CriticalRegime(0.5, 1.0).at_size(critical_size),
    }
