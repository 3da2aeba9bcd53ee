"""Monte Carlo experiments: sample p_k at several levels, compare with theory.

Sample i always uses seed mix(master_seed, run_id, i), whatever the number of
workers; chunks are reassembled in index order before any statistic is
formed, so reports are identical across worker counts.
"""
from __future__ import annotations

import math
import multiprocessing as mp
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ..combinatorics import moments_pk
from ..environment import CriticalRegime
from ..rng import mix
from ..sampler.levels import QUENCHED_INDEX, sample_weights
from ..sampler.shuffling import grow, level_signature_from_edges, reduce_weights_one_periodic
from ..analytic.clt import clt_cov_critical, clt_cov_fixed
from ..analytic.finite import (exact_cov_p1_two_levels, exact_mean_pk_annealed,
                               exact_mean_pk_quenched, exact_var_p1_annealed)
from ..analytic.lln import lln_moment_contour
from ..analytic.params import ModelParams
from .config import ExperimentConfig
from .stats import Estimate, cov_estimate, mean_estimate, normality

CHUNK = 25


class SamplerFailure(RuntimeError):
    pass


# ------------------------------------------------------------- sampling


def _sample_block(args):
    cfg_data, start, stop, shared_W = args
    cfg = ExperimentConfig(**cfg_data)
    regime = cfg.regime()
    Ns = cfg.level_sizes()
    shared = reduce_weights_one_periodic(shared_W) if shared_W is not None else None
    out = np.empty((stop - start, len(Ns), len(cfg.orders)))
    for i in range(start, stop):
        seed = mix(cfg.master_seed, cfg.run_id, i)
        try:
            probs = shared
            if probs is None:
                probs = reduce_weights_one_periodic(sample_weights(regime, cfg.M, seed))
            X = grow(probs, seed)
            for a, N in enumerate(Ns):
                lam = level_signature_from_edges(X, N)
                for b, k in enumerate(cfg.orders):
                    out[i - start, a, b] = float(moments_pk(lam, k))
        except Exception as e:  # noqa: BLE001 - re-raised with the index
            raise SamplerFailure(f"sample {i} (seed {seed}): {e}") from e
    return out


def quenched_weights(cfg: ExperimentConfig) -> np.ndarray:
    return sample_weights(cfg.regime(), cfg.M, mix(cfg.master_seed, cfg.run_id, QUENCHED_INDEX))


def sample_moments(cfg: ExperimentConfig) -> np.ndarray:
    """Array of p_k values with shape (samples, levels, orders)."""
    shared = quenched_weights(cfg) if cfg.mode == "quenched" else None
    data = cfg.model_dump()
    jobs = [(data, s, min(s + CHUNK, cfg.samples), shared)
            for s in range(0, cfg.samples, CHUNK)]
    grow(reduce_weights_one_periodic([1.0]), 0)  # compile before forking
    if cfg.workers == 1 or len(jobs) == 1:
        parts = [_sample_block(j) for j in jobs]
    else:
        with mp.get_context("fork").Pool(cfg.workers) as pool:
            parts = pool.map(_sample_block, jobs, chunksize=1)
    return np.concatenate(parts, axis=0)


# --------------------------------------------------------------- reports


@dataclass
class ReportEntry:
    quantity: str  # "mean" or "cov"
    k: int
    l: int | None
    alpha1: float
    alpha2: float | None
    N1: int
    N2: int | None
    scale: str
    theory: float
    method: str
    estimate: float
    stderr: float
    z: float
    ratio: float
    finite_exact: float | None = None
    finite_exact_z: float | None = None


@dataclass
class NormalityEntry:
    k: int
    alpha: float
    N: int
    skewness: float
    excess_kurtosis: float
    anderson_darling: float


@dataclass
class MomentReport:
    experiment: str
    environment: str
    M: int
    samples: int
    mode: str
    entries: list[ReportEntry] = field(default_factory=list)
    normality: list[NormalityEntry] = field(default_factory=list)
    quenched_weights: list[float] | None = None
    seconds: float = 0.0

    def find(self, quantity: str, k: int, l: int | None = None, N1: int | None = None,
             N2: int | None = None) -> ReportEntry:
        for e in self.entries:
            if (e.quantity == quantity and e.k == k and e.l == l
                    and (N1 is None or e.N1 == N1) and (N2 is None or e.N2 == N2)):
                return e
        raise KeyError((quantity, k, l, N1, N2))

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        return d


def _entry(quantity, k, l, a1, a2, N1, N2, scale, theory, method, est: Estimate,
           exact=None) -> ReportEntry:
    ratio = est.value / theory if theory else math.nan
    return ReportEntry(quantity, k, l, a1, a2, N1, N2, scale, theory, method, est.value,
                       est.se, est.z(theory), ratio, exact,
                       None if exact is None else est.z(exact))


def _report(cfg: ExperimentConfig, name: str) -> MomentReport:
    rep = MomentReport(name, cfg.regime().label(), cfg.M, cfg.samples, cfg.mode)
    if cfg.mode == "quenched":
        rep.quenched_weights = [float(w) for w in quenched_weights(cfg)]
    return rep


def _add_normality(rep, cfg, P):
    for a, N in enumerate(cfg.level_sizes()):
        for b, k in enumerate(cfg.orders):
            nm = normality(P[:, a, b])
            rep.normality.append(NormalityEntry(k, N / cfg.M, N, nm.skewness,
                                                nm.excess_kurtosis, nm.anderson_darling))


def _finite_env(cfg):
    """(annealed law at size M, or quenched betas)."""
    if cfg.mode == "quenched":
        W = quenched_weights(cfg)
        return None, W / (1 + W)
    return cfg.regime().at_size(cfg.M), None


def run_lln_experiment(cfg: ExperimentConfig, P: np.ndarray | None = None) -> MomentReport:
    """Means of p_k / N^(k+1) at each level against the limit moments (contour
    integral at alpha = N/M), plus the exact finite-N mean."""
    t0 = time.perf_counter()
    if P is None:
        P = sample_moments(cfg)
    rep = _report(cfg, "lln")
    law, betas = _finite_env(cfg)
    limit = cfg.regime().limit()
    for a, N in enumerate(cfg.level_sizes()):
        p = ModelParams.from_sizes(N, cfg.M, limit)
        for b, k in enumerate(cfg.orders):
            est = mean_estimate(P[:, a, b] / float(N) ** (k + 1), cfg.batches)
            if law is not None:
                exact = exact_mean_pk_annealed(k, N, cfg.M, law)
            else:
                exact = exact_mean_pk_quenched(k, N, betas)
            rep.entries.append(_entry("mean", k, None, N / cfg.M, None, N, None,
                                      f"N^{k + 1}", lln_moment_contour(k, p), "contour", est,
                                      exact / float(N) ** (k + 1)))
    _add_normality(rep, cfg, P)
    rep.seconds = time.perf_counter() - t0
    return rep


def _cov_theory(cfg, k, l, N1, N2):
    """(theory, method, scale exponent, finite exact or None)."""
    reg = cfg.regime()
    M = cfg.M
    law, _ = _finite_env(cfg)
    if isinstance(reg, CriticalRegime):
        th = clt_cov_critical(k, l, N1 / M, N2 / M, reg.beta, reg.sigma)
        expo = k + l
        exact = None
        if k == l == 1 and law is not None:
            exact = exact_cov_p1_two_levels(N1, N2, M, law) / float(M) ** 2
        return th, "contour", f"M^{expo}", float(M) ** expo, exact
    if N1 != N2:
        exact = None
        if k == l == 1 and law is not None:
            exact = exact_cov_p1_two_levels(N1, N2, M, law) / (float(N1) * N1 * N2)
        return math.nan, "unavailable", "N1^2 N2", float(N1) ** (k + 1) * N2 ** l, exact
    p = ModelParams.from_sizes(N1, M, reg.limit())
    expo = k + l + 1
    exact = None
    if k == l == 1 and law is not None:
        exact = exact_var_p1_annealed(N1, M, law) / float(N1) ** 3
    return clt_cov_fixed(k, l, p), "contour", f"N^{expo}", float(N1) ** expo, exact


def _cov_entries(rep, cfg, P, pairs):
    Ns = cfg.level_sizes()
    for (a1, b1), (a2, b2) in pairs:
        N1, N2 = Ns[a1], Ns[a2]
        k, l = cfg.orders[b1], cfg.orders[b2]
        th, method, scale, denom, exact = _cov_theory(cfg, k, l, N1, N2)
        est = cov_estimate(P[:, a1, b1] / math.sqrt(denom), P[:, a2, b2] / math.sqrt(denom),
                           cfg.batches)
        e = _entry("cov", k, l, N1 / cfg.M, N2 / cfg.M, N1, N2, scale, th, method, est, exact)
        if method == "unavailable":
            e.z = e.ratio = math.nan
        rep.entries.append(e)


def run_clt_experiment(cfg: ExperimentConfig, P: np.ndarray | None = None) -> MomentReport:
    """Cov(p_k, p_l) within each level: scale N^(k+l+1) against the fixed-regime
    formula, or M^(k+l) against the critical one."""
    t0 = time.perf_counter()
    if P is None:
        P = sample_moments(cfg)
    rep = _report(cfg, "clt")
    n = len(cfg.orders)
    pairs = [((a, b1), (a, b2)) for a in range(len(cfg.levels))
             for b1 in range(n) for b2 in range(b1, n)]
    _cov_entries(rep, cfg, P, pairs)
    _add_normality(rep, cfg, P)
    rep.seconds = time.perf_counter() - t0
    return rep


def run_multilevel_experiment(cfg: ExperimentConfig, P: np.ndarray | None = None) -> MomentReport:
    """Cross-level Cov(p_k1 at alpha1, p_k2 at alpha2), both read off the same tilings."""
    t0 = time.perf_counter()
    if len(cfg.levels) != 2 or not cfg.levels[0] < cfg.levels[1]:
        raise ValueError("multilevel needs two levels alpha1 < alpha2")
    if P is None:
        P = sample_moments(cfg)
    rep = _report(cfg, "multilevel")
    n = len(cfg.orders)
    pairs = [((0, b1), (1, b2)) for b1 in range(n) for b2 in range(n)]
    _cov_entries(rep, cfg, P, pairs)
    _add_normality(rep, cfg, P)
    rep.seconds = time.perf_counter() - t0
    return rep


RUNNERS = {"lln": run_lln_experiment, "clt": run_clt_experiment,
           "multilevel": run_multilevel_experiment}


def run_experiment(cfg: ExperimentConfig, P: np.ndarray | None = None) -> MomentReport:
    return RUNNERS[cfg.experiment](cfg, P)
