"""Consistency web: independent routes to the same analytic quantities."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..environment import point_mass, standard_environments
from ..analytic.clt import (clt_cov_critical, clt_cov_critical_bg2, clt_cov_fixed,
                            clt_cov_general_schur, critical_k1_closed, fixed_k1_closed)
from ..analytic.cumulants import free_cumulants, moments_from_free_cumulants
from ..analytic.lemmas import lemma_property_tests
from ..analytic.limit_shape import arctic_curve, limit_shape_density
from ..analytic.lln import lln_moment
from ..analytic.params import ModelParams

LLN_TOL = 1e-8
CLT_TOL = 1e-6
K1_TOL = 1e-10
ARCTIC_TOL = 1e-6


@dataclass
class Check:
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tol)


@dataclass
class SelfCheckReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name, error, tol):
        self.checks.append(Check(name, float(error), tol))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def lln_web(alphas=(0.5, 1 / 3), k_max: int = 6) -> list[Check]:
    out = []
    for name, dist in standard_environments().items():
        for al in alphas:
            p = ModelParams.from_alpha(al, dist)
            err_g = err_c = 0.0
            for k in range(1, k_max + 1):
                c = lln_moment(k, p, "contour")
                err_g = max(err_g, abs(lln_moment(k, p, "general") - c))
                err_c = max(err_c, abs(lln_moment(k, p, "resolvent") - c))
            out.append(Check(f"lln general=contour {name} alpha={al:.4g}", err_g, LLN_TOL))
            out.append(Check(f"lln resolvent=contour {name} alpha={al:.4g}", err_c, LLN_TOL))
            mu1 = 0.5 + p.a * dist.mean()
            out.append(Check(f"lln mu1 residue {name} alpha={al:.4g}",
                             abs(lln_moment(1, p) - mu1), LLN_TOL))
            mus = [lln_moment(k, p) for k in range(1, k_max + 1)]
            rec = moments_from_free_cumulants(free_cumulants(k_max, p))
            out.append(Check(f"free cumulants reconstruct {name} alpha={al:.4g}",
                             max(abs(x - y) for x, y in zip(rec, mus)), LLN_TOL))
        p0 = ModelParams(0.0, dist)
        out.append(Check(f"lln a=0 uniform moments {name}",
                         max(abs(lln_moment(k, p0) - 1 / (k + 1)) for k in range(1, k_max + 1)),
                         LLN_TOL))
    c0 = free_cumulants(2, ModelParams(0.0, point_mass(0.5)))
    out.append(Check("free cumulant c2 = 1/12 at a=0", abs(c0[1] - 1 / 12), LLN_TOL))
    return out


def clt_web(alpha: float = 0.5, k_max: int = 3) -> list[Check]:
    out = []
    for name, dist in standard_environments().items():
        p = ModelParams.from_alpha(alpha, dist)
        err = 0.0
        for k in range(1, k_max + 1):
            for l in range(1, k_max + 1):
                err = max(err, abs(clt_cov_general_schur(k, l, p) - clt_cov_fixed(k, l, p)))
        out.append(Check(f"clt general=fixed {name}", err, CLT_TOL))
        out.append(Check(f"clt k=l=1 closed form {name}",
                         abs(clt_cov_fixed(1, 1, p) - fixed_k1_closed(p)), K1_TOL))
    pm = ModelParams.from_alpha(alpha, point_mass(0.5))
    out.append(Check("clt point mass vanishes",
                     max(abs(clt_cov_fixed(k, l, pm)) for k in range(1, 4) for l in range(1, 4)),
                     K1_TOL))
    err = err1 = 0.0
    for a1, a2 in ((1 / 3, 2 / 3), (0.5, 0.5), (0.25, 0.6)):
        for sigma in (0.0, 1.0):
            for k1 in (1, 2):
                for k2 in (1, 2):
                    v = clt_cov_critical(k1, k2, a1, a2, 0.5, sigma)
                    err = max(err, abs(v - clt_cov_critical_bg2(k1, k2, a1, a2, 0.5, sigma)))
            err1 = max(err1, abs(clt_cov_critical(1, 1, a1, a2, 0.5, sigma)
                                 - critical_k1_closed(a1, a2, 0.5, sigma)))
    out.append(Check("critical contour = generic double integral", err, CLT_TOL))
    out.append(Check("critical k=1 closed form", err1, K1_TOL))
    return out


def limit_shape_web() -> list[Check]:
    arc = arctic_curve(point_mass(0.5))
    dev = np.max(np.abs((2 * arc[:, 0] - 1) ** 2 + (2 * arc[:, 1] - 1) ** 2 - 1))
    centre = limit_shape_density(0.5, 0.5, point_mass(0.5))
    return [Check("arctic circle for point mass 1/2", dev, ARCTIC_TOL),
            Check("density 1/2 at the centre", abs(centre.density - 0.5), 1e-9),
            Check("centre root z = i", abs(centre.z - 1j), 1e-8)]


def run_selfcheck(seed: int = 0) -> tuple[SelfCheckReport, object]:
    rep = SelfCheckReport()
    lem = lemma_property_tests(seed)
    rep.add("symmetrization identity (relative)", lem.sym_max_rel_error, 1e-5)
    rep.add("roots-of-unity vanishing", lem.roots_max_abs, 1e-10)
    rep.add("eigenrelation failures", len(lem.eigen_failures), 0)
    rep.checks += lln_web() + clt_web() + limit_shape_web()
    return rep, lem
