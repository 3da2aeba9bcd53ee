"""Command-line interface.

Exit codes: 0 success, 1 invalid input or configuration, 2 a numerical check
failed its tolerance.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE = 0, 1, 2


class ToleranceFailure(Exception):
    pass


def _out_dir(args) -> Path:
    p = Path(args.out or ".")
    p.mkdir(parents=True, exist_ok=True)
    return p


def _floats(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _stdout_csv(columns, rows):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])


# -------------------------------------------------------------- commands


def cmd_sample(args) -> int:
    from .aztec import render_svg, signatures_to_tiling, tiling_to_bytes
    from .environment import parse_dist, sample_environment
    from .harness.io import RunManifest, inputs_hash
    from .rng import mix
    from .sampler import chain_sample, shuffle_sample

    if (args.weights is None) == (args.dist is None):
        raise ValueError("give exactly one of --weights and --dist")
    if args.weights is not None:
        W = np.array(args.weights, dtype=float)
        M = len(W)
        regime = None
    else:
        if args.M is None:
            raise ValueError("--M is required with --dist")
        M = args.M
        regime = parse_dist(args.dist)
    if M < 1 or np.any(np.asarray(args.weights or [1.0]) <= 0):
        raise ValueError("need M >= 1 and positive weights")
    out = _out_dir(args)
    t0 = time.perf_counter()
    files = []
    for i in range(args.count):
        seed = mix(args.seed, 0, i)
        Wi = W if regime is None else sample_environment(regime, M, seed).weights
        if args.sampler == "chain":
            t = signatures_to_tiling(chain_sample(Wi / (1 + Wi), seed))
        else:
            t = shuffle_sample(Wi, seed)
        if args.format in ("svg", "both"):
            p = out / f"tiling_{i:04d}.svg"
            p.write_text(render_svg(t, args.palette))
            files.append(p)
        if args.format in ("bin", "both"):
            p = out / f"tiling_{i:04d}.bin"
            p.write_bytes(tiling_to_bytes(t))
            files.append(p)
    inputs = {"M": M, "count": args.count,
              "seed": args.seed, "sampler": args.sampler, "format": args.format,
              "palette": args.palette,
              "environment": regime.to_json() if regime is not None else W.tolist()}
    man = RunManifest("sample", inputs_hash(inputs), inputs=inputs,
                      timings={"seconds": time.perf_counter() - t0})
    man.add_outputs(files, out)
    man.write(out)
    print(f"wrote {args.count} tilings of size {M} to {out}")
    return EXIT_OK


def cmd_enumerate_verify(args) -> int:
    from .harness.verify import exactness_suite

    res = exactness_suite(args.M)
    for f in res.failures:
        print("FAIL", f)
    if not res.passed:
        raise ToleranceFailure(f"{len(res.failures)} exactness failures at M={args.M}")
    print(f"{res.tilings} tilings verified")
    return EXIT_OK


def cmd_limit_shape(args) -> int:
    from .aztec import write_pgm
    from .analytic.limit_shape import arctic_curve, density_grid
    from .environment import parse_dist
    from .harness.io import (ARCTIC_COLUMNS, GRID_COLUMNS, RunManifest, density_image,
                             grid_rows, inputs_hash, write_csv)

    if args.grid < 1:
        raise ValueError("--grid must be >= 1")
    dist = parse_dist(args.dist).limit()
    out = _out_dir(args)
    t0 = time.perf_counter()
    _, _, pts = density_grid(args.grid, dist)
    arc = arctic_curve(dist, args.arctic_points)
    files = [write_csv(out / "limit_shape.csv", GRID_COLUMNS, grid_rows(pts)),
             write_csv(out / "arctic.csv", ARCTIC_COLUMNS, arc.tolist())]
    pgm = out / "limit_shape.pgm"
    write_pgm(pgm, density_image(pts, args.grid))
    files.append(pgm)
    inputs = {"dist": dist.to_json(), "grid": args.grid, "arctic_points": args.arctic_points}
    man = RunManifest("limit-shape", inputs_hash(inputs), inputs=inputs,
                      timings={"seconds": time.perf_counter() - t0})
    man.add_outputs(files, out)
    man.write(out)
    dens = np.array([p.density for p in pts])
    print(f"{len(pts)} grid points, {int(sum(p.frozen for p in pts))} frozen; "
          f"{len(arc)} arctic points")
    if np.any(dens < 0) or np.any(dens > 1):
        raise ToleranceFailure("density outside [0, 1]")
    if dist.kind == "point_mass" and abs(dist.b[0] - 0.5) < 1e-15:
        dev = float(np.max(np.abs((2 * arc[:, 0] - 1) ** 2 + (2 * arc[:, 1] - 1) ** 2 - 1)))
        print(f"arctic circle max deviation {dev:.3e}")
        if dev > 1e-6:
            raise ToleranceFailure("arctic curve is off the circle")
    return EXIT_OK


def cmd_moments(args) -> int:
    from .analytic.cumulants import free_cumulants, moments_from_free_cumulants
    from .analytic.lln import lln_moment
    from .analytic.params import ModelParams
    from .environment import parse_dist
    from .harness.io import write_csv

    dist = parse_dist(args.dist).limit()
    cols = ["alpha", "k", "contour", "general", "resolvent", "free_cumulant",
            "free_cumulant_moment"]
    rows = []
    worst = 0.0
    for al in args.alpha:
        p = ModelParams.from_alpha(al, dist)
        cum = free_cumulants(args.kmax, p)
        rec = moments_from_free_cumulants(cum)
        for k in range(1, args.kmax + 1):
            vals = [lln_moment(k, p, m) for m in ("contour", "general", "resolvent")]
            worst = max(worst, max(vals) - min(vals), abs(rec[k - 1] - vals[0]))
            rows.append([al, k, *vals, cum[k - 1], rec[k - 1]])
    _stdout_csv(cols, rows)
    if args.out:
        write_csv(_out_dir(args) / "moments.csv", cols, rows)
    if worst > 1e-8:
        raise ToleranceFailure(f"moment routes disagree by {worst:.3e}")
    return EXIT_OK


def cmd_clt(args) -> int:
    from .analytic.clt import (clt_cov_critical, clt_cov_critical_bg2, clt_cov_fixed,
                               clt_cov_general_schur)
    from .analytic.params import ModelParams
    from .environment import CriticalRegime, parse_dist
    from .harness.io import write_csv

    reg = parse_dist(args.dist)
    rows = []
    worst = 0.0
    ks = range(1, args.kmax + 1)
    if isinstance(reg, CriticalRegime):
        a1 = args.alpha[0]
        a2 = args.alpha2 if args.alpha2 is not None else a1
        cols = ["alpha1", "alpha2", "k1", "k2", "contour", "generic"]
        for k1 in ks:
            for k2 in ks:
                c = clt_cov_critical(k1, k2, a1, a2, reg.beta, reg.sigma)
                g = clt_cov_critical_bg2(k1, k2, a1, a2, reg.beta, reg.sigma)
                worst = max(worst, abs(c - g))
                rows.append([a1, a2, k1, k2, c, g])
    else:
        if args.alpha2 is not None:
            raise ValueError("--alpha2 is only meaningful for a critical environment")
        cols = ["alpha", "k", "l", "contour", "general"]
        for al in args.alpha:
            p = ModelParams.from_alpha(al, reg.limit())
            for k in ks:
                for l in ks:
                    c = clt_cov_fixed(k, l, p)
                    g = clt_cov_general_schur(k, l, p)
                    worst = max(worst, abs(c - g))
                    rows.append([al, k, l, c, g])
    _stdout_csv(cols, rows)
    if args.out:
        write_csv(_out_dir(args) / "clt.csv", cols, rows)
    if worst > 1e-6:
        raise ToleranceFailure(f"covariance routes disagree by {worst:.3e}")
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    from .harness.config import load_config
    from .harness.experiments import run_experiment, sample_moments
    from .harness.io import RunManifest, write_report

    cfg = load_config(args.config, master_seed=args.seed, workers=args.workers, out=args.out)
    t0 = time.perf_counter()
    P = sample_moments(cfg)
    t1 = time.perf_counter()
    rep = run_experiment(cfg, P)
    out = Path(cfg.out or ".")
    files = write_report(out, rep, P, cfg)
    man = RunManifest("montecarlo", cfg.config_hash(), inputs=cfg.canonical(),
                      timings={"sampling_seconds": t1 - t0,
                               "analysis_seconds": time.perf_counter() - t1,
                               "workers": cfg.workers})
    man.add_outputs(files, out)
    man.write(out)
    print(f"{rep.experiment} {rep.environment} M={rep.M} samples={rep.samples} mode={rep.mode}")
    for e in rep.entries:
        lvl = f"N={e.N1}" if e.N2 is None else f"N1={e.N1} N2={e.N2}"
        kl = f"k={e.k}" if e.l is None else f"k={e.k} l={e.l}"
        print(f"  {e.quantity} {kl} {lvl}: estimate {e.estimate:.6g} +- {e.stderr:.2g}, "
              f"theory {e.theory:.6g} [{e.method}], z {e.z:.2f}, ratio {e.ratio:.4f}")
    for n in rep.normality:
        print(f"  normality k={n.k} N={n.N}: skew {n.skewness:.3f}, "
              f"excess kurtosis {n.excess_kurtosis:.3f}, AD {n.anderson_darling:.3f}")
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .harness.selfcheck import run_selfcheck

    rep, _ = run_selfcheck(args.seed)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.error:.3e} (tol {c.tol:g})")
    if not rep.passed:
        raise ToleranceFailure("selfcheck failed")
    print(f"all {len(rep.checks)} checks passed")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--out", default=None, help="output directory")

    p = argparse.ArgumentParser(prog="randaztec",
                                description="Aztec diamond tilings in random environments")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", parents=[common], help="draw tilings (SVG / binary)")
    s.add_argument("--M", type=int)
    s.add_argument("--weights", type=_floats, help="explicit W_1..W_M, comma separated")
    s.add_argument("--dist", help="environment, e.g. point:0.5 or w-atoms:0.5,5")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--sampler", choices=["shuffle", "chain"], default="shuffle")
    s.add_argument("--format", choices=["svg", "bin", "both"], default="svg")
    s.add_argument("--palette", choices=["four-color", "eight-shade-grayscale"],
                   default="four-color")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("enumerate-verify", parents=[common], help="exact checks for M <= 4")
    s.add_argument("--M", type=int, default=3)
    s.set_defaults(func=cmd_enumerate_verify)

    s = sub.add_parser("limit-shape", parents=[common], help="density grid and arctic curve")
    s.add_argument("--dist", default="point:0.5")
    s.add_argument("--grid", type=int, default=200)
    s.add_argument("--arctic-points", type=int, default=2000)
    s.set_defaults(func=cmd_limit_shape)

    s = sub.add_parser("moments", parents=[common], help="limit moment tables")
    s.add_argument("--dist", default="point:0.5")
    s.add_argument("--alpha", type=_floats, default=[0.5])
    s.add_argument("--kmax", type=int, default=6)
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("clt", parents=[common], help="limit covariance tables")
    s.add_argument("--dist", default="w-atoms:0.5,5")
    s.add_argument("--alpha", type=_floats, default=[0.5])
    s.add_argument("--alpha2", type=float, default=None)
    s.add_argument("--kmax", type=int, default=3)
    s.set_defaults(func=cmd_clt)

    s = sub.add_parser("montecarlo", parents=[common], help="run a Monte Carlo experiment")
    s.add_argument("--config", required=True, help="JSON experiment config")
    s.set_defaults(func=cmd_montecarlo)

    s = sub.add_parser("selfcheck", parents=[common], help="identity checks and analytic consistency web")
    s.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK
    if args.seed is None and args.command != "montecarlo":
        args.seed = 0
    if args.workers is not None and args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except ToleranceFailure as e:
        print(f"tolerance failure: {e}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ArithmeticError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
