"""Report, CSV and manifest writers."""
from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import platform
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

from ..rng import SEED_RULE, mix

REPORT_COLUMNS = ["quantity", "k", "l", "alpha1", "alpha2", "N1", "N2", "scale", "theory",
                  "method", "estimate", "stderr", "z", "ratio", "finite_exact",
                  "finite_exact_z"]
NORMALITY_COLUMNS = ["k", "alpha", "N", "skewness", "excess_kurtosis", "anderson_darling"]
SAMPLE_COLUMNS = ["index", "seed", "N", "k", "p_k"]
GRID_COLUMNS = ["alpha", "y", "density", "frozen", "z_re", "z_im", "residual"]
ARCTIC_COLUMNS = ["alpha", "y", "z"]


def code_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_clean(x) for x in v]
    return v


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")
    return path


def write_csv(path, columns, rows) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c] if isinstance(r, dict) else r[i])
                        for i, c in enumerate(columns)])
    return path


def write_report(out_dir, report, P=None, cfg=None) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = [write_json(out / "report.json", report.to_json()),
             write_csv(out / "report.csv", REPORT_COLUMNS, [asdict(e) for e in report.entries]),
             write_csv(out / "normality.csv", NORMALITY_COLUMNS,
                       [asdict(e) for e in report.normality])]
    if P is not None and cfg is not None:
        rows = []
        Ns = cfg.level_sizes()
        for i in range(P.shape[0]):
            seed = mix(cfg.master_seed, cfg.run_id, i)
            for a, N in enumerate(Ns):
                for b, k in enumerate(cfg.orders):
                    rows.append([i, seed, N, k, int(P[i, a, b])])
        files.append(write_csv(out / "samples.csv", SAMPLE_COLUMNS, rows))
    return files


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    config_hash: str
    code_version: str = field(default_factory=code_version)
    seed_rule: str = SEED_RULE
    inputs: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    platform: str = field(default_factory=platform.platform)

    def add_outputs(self, paths, root) -> None:
        for p in paths:
            self.outputs[os.path.relpath(p, root)] = sha256_file(p)

    def write(self, out_dir) -> Path:
        return write_json(Path(out_dir) / "manifest.json", asdict(self))


def inputs_hash(inputs: dict) -> str:
    blob = json.dumps(_clean(inputs), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def grid_rows(points):
    for p in points:
        yield [p.alpha, p.y, p.density, int(p.frozen), p.z.real, p.z.imag, p.residual]


def density_image(points, n: int) -> np.ndarray:
    """n x n array of densities, row index = y index (as write_pgm expects)."""
    return np.array([p.density for p in points]).reshape(n, n)
