"""Experiment configuration (strict JSON schema)."""
from __future__ import annotations

import hashlib
import json
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..environment import CriticalRegime, EnvironmentError_, dist_from_json

MIN_BATCHES = 20


class ConfigError(ValueError):
    pass


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: Literal["lln", "clt", "multilevel"] = "lln"
    M: int = Field(ge=1)
    levels: list[float] = Field(min_length=1)
    orders: list[int] = Field(default=[1], min_length=1)
    samples: int = Field(ge=2)
    mode: Literal["annealed", "quenched"] = "annealed"
    environment: dict
    master_seed: int = Field(default=0, ge=0, lt=2 ** 64)
    run_id: int = Field(default=0, ge=0, lt=2 ** 64)
    batches: int = Field(default=MIN_BATCHES, ge=MIN_BATCHES)
    workers: int = Field(default=1, ge=1)
    out: str | None = None

    @field_validator("levels")
    @classmethod
    def _levels(cls, v):
        if any(not 0 < a < 1 for a in v):
            raise ValueError("all levels must lie in (0, 1)")
        return v

    @field_validator("orders")
    @classmethod
    def _orders(cls, v):
        if any(k < 1 for k in v):
            raise ValueError("moment orders must be >= 1")
        return sorted(set(v))

    @field_validator("environment")
    @classmethod
    def _env(cls, v):
        try:
            dist_from_json(v)
        except EnvironmentError_ as e:
            raise ValueError(str(e)) from None
        return v

    @model_validator(mode="after")
    def _consistent(self):
        if self.samples < self.batches:
            raise ValueError(f"need at least {self.batches} samples for batch means")
        Ns = self.level_sizes()
        if len(set(Ns)) != len(Ns):
            raise ValueError(f"levels map to repeated sizes N={Ns} at M={self.M}")
        if self.experiment == "multilevel":
            if len(self.levels) != 2 or not self.levels[0] < self.levels[1]:
                raise ValueError("multilevel needs two levels alpha1 < alpha2")
        if self.experiment in ("clt", "multilevel") and self.samples < 1000:
            raise ValueError("covariance experiments need at least 1000 samples")
        reg = self.regime()
        if isinstance(reg, CriticalRegime) and reg.sigma > 0 and self.M < reg.minimal_size():
            raise ValueError(f"critical regime needs M >= {reg.minimal_size()}")
        return self

    def regime(self):
        return dist_from_json(self.environment)

    def level_sizes(self) -> list[int]:
        """N = round(alpha M), clipped to 1..M."""
        return [min(self.M, max(1, round(a * self.M))) for a in self.levels]

    def canonical(self) -> dict:
        """The fields that determine the outputs (workers and out excluded)."""
        return self.model_dump(exclude={"workers", "out"})

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path, **overrides) -> ExperimentConfig:
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return make_config(data)


def make_config(data: dict) -> ExperimentConfig:
    from pydantic import ValidationError
    try:
        return ExperimentConfig(**data)
    except ValidationError as e:
        raise ConfigError(str(e)) from None
