import json
import subprocess
import sys

import numpy as np
import pytest

from grushin.cli import main
from grushin.grids import GrushinConfig
from grushin.io import read_grid


@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "config.json"
    path.write_text(GrushinConfig(N_prime=64, N_doubleprime=64, K=24, L_prime=8.0, L_doubleprime=10.0).to_json())
    return str(path)


def test_transform_forward_builtin_psi(tmp_path, capsys):
    out = tmp_path / "psi.csv"
    assert main(["transform", "forward", "--in", "builtin:psi:3:5", "--output", str(out)]) == 0
    summary = json.loads((tmp_path / "psi_summary.json").read_text())
    assert abs(summary["norm_ratio"] - 1) < 1e-9
    assert out.exists()


def test_transform_roundtrip_gaussian(tmp_path):
    assert main(["transform", "forward", "--in", "builtin:gaussian", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "dual_summary.json").read_text())
    assert summary["roundtrip_max_abs"] < 1e-9
    assert main(["transform", "inverse", "--in", str(tmp_path / "dual.csv"), "--out", str(tmp_path)]) == 0
    back = read_grid(tmp_path / "grid.csv", GrushinConfig())
    from grushin.testfunctions import gaussian
    assert np.max(np.abs(back.values - gaussian(GrushinConfig(), 1.3, 2.0).values)) < 1e-9


def test_malformed_config_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    data = GrushinConfig().to_dict()
    data["D"] = 4
    bad.write_text(json.dumps(data))
    assert main(["transform", "forward", "--in", "builtin:gaussian", "--config", str(bad),
                 "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert len(err.strip().splitlines()) == 1 and "D=4" in err


def test_global_flags_before_subcommand(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1, "D": 7}')
    assert main(["--config", str(bad), "transform", "forward", "--in", "builtin:gaussian"]) == 2


def test_missing_input_exit_1(tmp_path):
    assert main(["transform", "forward", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path)]) == 1


def test_unknown_builtin_exit_2(tmp_path):
    assert main(["transform", "forward", "--in", "builtin:square", "--out", str(tmp_path)]) == 2


def test_evolve(tmp_path, small_config, capsys):
    rc = main(["evolve", "--t", "0.1,0.2,0.4", "--in", "builtin:gaussian", "--config", small_config,
               "--out", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "report.json").read_text())
    ratios = [r["contraction_ratio"] for r in report["runs"]]
    assert len(ratios) == 3 and 1 >= ratios[0] >= ratios[1] >= ratios[2]
    assert sorted(p.name for p in tmp_path.glob("evolved_*.csv")) == [
        "evolved_t0.1.csv", "evolved_t0.2.csv", "evolved_t0.4.csv"]


def test_evolve_projection(tmp_path, small_config):
    assert main(["evolve", "--t", "0.1", "--symbol", "projection:5", "--in", "builtin:gaussian",
                 "--config", small_config, "--out", str(tmp_path)]) == 0


@pytest.mark.parametrize("args", [["--t", "-1"], ["--t", "0.1", "--symbol", "cube"], ["--t", "abc"]])
def test_evolve_bad_arguments(tmp_path, args):
    assert main(["evolve", "--in", "builtin:gaussian", "--out", str(tmp_path), *args]) == 2


def test_kernel_point(tmp_path, capsys):
    assert main(["kernel", "--t", "1", "--x", "0,0", "--y", "0.5,1", "--method", "hankel",
                 "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "kernel.csv").read_text().splitlines()
    assert lines[0] == "method,p_t" and float(lines[1].split(",")[1]) > 0


def test_kernel_slice_decays(tmp_path):
    assert main(["kernel", "--t", "1", "--x", "0,0", "--y", "0,0", "--grid-slice", "y2=0:6:13",
                 "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "kernel.csv").read_text().splitlines()[1:]
    vals = [float(r.split(",")[2]) for r in rows]
    assert len(vals) == 13 and all(a > b for a, b in zip(vals, vals[1:]))


def test_kernel_bad_time(tmp_path):
    assert main(["kernel", "--t", "0", "--x", "0,0", "--y", "0,0", "--out", str(tmp_path)]) == 2


def test_verify_subset_and_tighten(tmp_path, small_config):
    assert main(["verify", "--only", "special", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["passed"] and {r["group"] for r in report["results"]} == {"special"}
    assert (tmp_path / "report.txt").read_text().strip().endswith("PASS")
    assert main(["verify", "--only", "special", "--tighten", "1e6", "--out", str(tmp_path)]) == 4
    report = json.loads((tmp_path / "report.json").read_text())
    assert not report["passed"]


def test_verify_unknown_group(tmp_path):
    assert main(["verify", "--only", "nonsense", "--out", str(tmp_path)]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "grushin.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "transform" in proc.stdout
