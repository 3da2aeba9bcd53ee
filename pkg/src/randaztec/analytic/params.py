"""Model parameters and contour discretization shared by the analytic formulas."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..environment import WeightDistribution

ROOTS_TOL = 1e-14


@dataclass(frozen=True)
class ModelParams:
    """a = lim (M - N) / N and alpha = lim N / M, so a = 1/alpha - 1."""

    a: float
    dist: WeightDistribution

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("a must be >= 0")

    @classmethod
    def from_alpha(cls, alpha: float, dist: WeightDistribution) -> "ModelParams":
        if not 0 < alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")
        return cls(1.0 / alpha - 1.0, dist)

    @classmethod
    def from_sizes(cls, N: int, M: int, dist: WeightDistribution) -> "ModelParams":
        return cls((M - N) / N, dist)

    @property
    def alpha(self) -> float:
        return 1.0 / (1.0 + self.a)


@dataclass(frozen=True)
class ContourSpec:
    center: complex
    radius: float
    nodes: int = 512

    def points(self):
        th = 2 * np.pi * np.arange(self.nodes) / self.nodes
        e = np.exp(1j * th)
        return self.center + self.radius * e, self.radius * e

    def integrate(self, f) -> complex:
        """(1 / 2 pi i) * contour integral of f, by the trapezoid rule."""
        z, jac = self.points()
        return complex(np.mean(f(z) * jac))


LLN_CONTOUR = ContourSpec(1.0, 0.5, 512)


def root_of_unity(m: int) -> complex:
    return complex(np.exp(2j * np.pi / m))


def assert_real(value: complex, tol: float, what: str) -> float:
    if abs(value.imag) > tol * max(1.0, abs(value.real)):
        raise ArithmeticError(f"{what}: imaginary part {value.imag:.3e} exceeds tolerance")
    return float(value.real)
