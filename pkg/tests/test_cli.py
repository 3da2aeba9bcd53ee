import csv
import io
import json
import subprocess
import sys

import pytest

from randaztec.aztec import tiling_from_bytes
from randaztec.cli import EXIT_INVALID, EXIT_OK, EXIT_TOLERANCE, main
from randaztec.harness.io import sha256_file


def test_sample_svg_and_bin(tmp_path):
    rc = main(["sample", "--weights", "1,2,0.5", "--count", "2", "--format", "both",
               "--seed", "3", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    t = tiling_from_bytes((tmp_path / "tiling_0001.bin").read_bytes())
    assert t.M == 3
    assert (tmp_path / "tiling_0000.svg").read_text().rstrip().endswith("</svg>")
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["outputs"]["tiling_0000.bin"] == sha256_file(tmp_path / "tiling_0000.bin")


def test_sample_is_reproducible(tmp_path):
    for d in ("a", "b"):
        assert main(["sample", "--M", "6", "--dist", "w-atoms:0.5,5", "--format", "bin",
                     "--sampler", "chain", "--out", str(tmp_path / d)]) == EXIT_OK
    assert (tmp_path / "a" / "tiling_0000.bin").read_bytes() == \
        (tmp_path / "b" / "tiling_0000.bin").read_bytes()


@pytest.mark.parametrize("argv", [
    ["sample", "--weights", "1,-2"],
    ["sample", "--dist", "point:0.5"],
    ["sample", "--weights", "1", "--dist", "point:0.5", "--M", "2"],
    ["sample", "--M", "3", "--dist", "bogus:1"],
    ["enumerate-verify", "--M", "9"],
    ["limit-shape", "--grid", "0"],
    ["clt", "--dist", "point:0.5", "--alpha2", "0.6"],
    ["montecarlo"],
    ["nonexistent"],
    ["selfcheck", "--workers", "0"],
])
def test_invalid_input_exit_code(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path)] if argv[0] != "nonexistent" else argv) \
        == EXIT_INVALID


def test_enumerate_verify(capsys):
    assert main(["enumerate-verify", "--M", "3"]) == EXIT_OK
    assert "64 tilings verified" in capsys.readouterr().out


def test_tolerance_exit_code(monkeypatch):
    import randaztec.harness.verify as verify

    res = verify.VerifyResult(2, 8, ["injected"])
    monkeypatch.setattr(verify, "exactness_suite", lambda M: res)
    assert main(["enumerate-verify", "--M", "2"]) == EXIT_TOLERANCE


def test_limit_shape_outputs(tmp_path, capsys):
    assert main(["limit-shape", "--grid", "30", "--arctic-points", "400",
                 "--out", str(tmp_path)]) == EXIT_OK
    assert "arctic circle max deviation" in capsys.readouterr().out
    with open(tmp_path / "limit_shape.csv") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 900 and set(rows[0]) >= {"alpha", "y", "density", "frozen"}
    assert (tmp_path / "limit_shape.pgm").read_bytes().startswith(b"P5")
    assert (tmp_path / "arctic.csv").exists() and (tmp_path / "manifest.json").exists()


def test_moments_and_clt_tables(tmp_path, capsys):
    assert main(["moments", "--dist", "w-atoms:0.5,5", "--alpha", "0.5,0.25", "--kmax", "3",
                 "--out", str(tmp_path)]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 6
    r = rows[0]
    assert float(r["contour"]) == pytest.approx(float(r["general"]), rel=1e-9)
    assert (tmp_path / "moments.csv").exists()

    assert main(["clt", "--dist", "critical:0.5,1", "--alpha", "0.3", "--alpha2", "0.7",
                 "--kmax", "2"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 4
    assert float(rows[0]["contour"]) == pytest.approx(0.3 * 0.7 * 0.3 + 0.3 * 0.3 * 0.25)


def test_montecarlo(tmp_path, capsys):
    cfg = {"M": 12, "levels": [0.5], "orders": [1], "samples": 40,
           "environment": {"kind": "point_mass", "b": 0.5}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    out = tmp_path / "run"
    assert main(["montecarlo", "--config", str(p), "--seed", "4", "--out", str(out)]) == EXIT_OK
    assert "mean k=1 N=6" in capsys.readouterr().out
    man = json.loads((out / "manifest.json").read_text())
    assert man["inputs"]["master_seed"] == 4
    assert set(man["outputs"]) == {"report.json", "report.csv", "normality.csv", "samples.csv"}
    p.write_text(json.dumps({**cfg, "samples": 5}))
    assert main(["montecarlo", "--config", str(p)]) == EXIT_INVALID


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "randaztec", "enumerate-verify", "--M", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "8 tilings verified" in r.stdout
    r = subprocess.run([sys.executable, "-m", "randaztec", "--help"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and "montecarlo" in r.stdout
