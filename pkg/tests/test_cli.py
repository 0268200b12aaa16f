import csv
import json

import pytest

from srgkit.cli import main

from conftest import STABLE_DEN, STABLE_NUM, UNSTABLE_DEN, UNSTABLE_NUM


@pytest.fixture
def stable_file(tmp_path):
    p = tmp_path / "stable.json"
    p.write_text(json.dumps({"num": list(STABLE_NUM), "den": list(STABLE_DEN)}))
    return str(p)


@pytest.fixture
def unstable_file(tmp_path):
    p = tmp_path / "unstable.json"
    p.write_text(json.dumps({"num": list(UNSTABLE_NUM), "den": list(UNSTABLE_DEN)}))
    return str(p)


def test_analyze_stable_default_bound(stable_file, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["analyze", "--plant", stable_file, "--out", str(out)])
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["certified"] is True
    assert abs(report["separation"] - 0.021) < 0.003
    assert abs(report["gain_bound"] - 47.6) < 5.0
    assert (out / "regions.json").exists()


def test_analyze_unstable_reference(unstable_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        ["analyze", "--plant", unstable_file, "--kp", "1.1", "--kr", "1.0",
         "--out", str(out)]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert abs(report["separation"] - 0.096) < 0.011
    assert abs(report["gain_bound"] - 10.42) < 1.2
    assert report["n_p"] == 1


def test_analyze_not_certified_exit_code(unstable_file, tmp_path):
    code = main(
        ["analyze", "--plant", unstable_file, "--kp", "0", "--kr", "1",
         "--out", str(tmp_path / "o")]
    )
    assert code == 1


def test_analyze_malformed_plant(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"num": [1.0]}))  # den missing
    code = main(["analyze", "--plant", str(bad), "--out", str(tmp_path / "o")])
    assert code == 2
    bad.write_text("{not json")
    assert main(["analyze", "--plant", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert main(["analyze", "--plant", str(tmp_path / "absent.json"),
                 "--out", str(tmp_path / "o")]) == 2


def test_design_min_kp(unstable_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        ["design", "--plant", unstable_file, "--kr", "-1", "--gamma-hat", "1",
         "--mode", "min-kp", "--out", str(out)]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["feasible"] is True
    assert 2.25 <= report["kp"] <= 2.45


def test_design_infeasible_exit_code(unstable_file, tmp_path):
    code = main(
        ["design", "--plant", unstable_file, "--kr", "1", "--gamma-hat", "1",
         "--mode", "min-kp", "--kp-max", "0.3", "--out", str(tmp_path / "o")]
    )
    assert code == 1


def test_design_invalid_gamma(unstable_file, tmp_path):
    code = main(
        ["design", "--plant", unstable_file, "--gamma-hat", "0",
         "--out", str(tmp_path / "o")]
    )
    assert code == 2


def test_simulate_writes_both_variants(unstable_file, tmp_path):
    out = tmp_path / "out"
    code = main(
        ["simulate", "--plant", unstable_file, "--kp", "1.1", "--kr", "1.0",
         "--horizon", "5", "--out", str(out)]
    )
    assert code == 0
    for name in ("trajectory.csv", "trajectory_lti.csv"):
        rows = list(csv.reader((out / name).read_text().splitlines()))
        assert rows[0][:3] == ["time", "y", "e"]
        assert len(rows) > 100


def test_simulate_divergence_exit_code(tmp_path):
    runaway = tmp_path / "runaway.json"
    runaway.write_text(json.dumps({"num": [1.0], "den": [1.0, -5.0]}))
    out = tmp_path / "out"
    code = main(
        ["simulate", "--plant", str(runaway), "--kp", "0", "--kr", "0",
         "--horizon", "20", "--dt-max", "5e-3", "--out", str(out)]
    )
    assert code == 1
    assert (out / "trajectory.csv").exists()


def test_nyquist_export(unstable_file, tmp_path):
    out = tmp_path / "out"
    code = main(["nyquist", "--plant", unstable_file, "--out", str(out)])
    assert code == 0
    doc = json.loads((out / "regions.json").read_text())
    assert doc["n_p"] == 1
    assert len(doc["nyquist"]["samples"]) >= 1024
    assert doc["encircled"]["unbounded"] is True


def test_nyquist_first_order_circle(tmp_path):
    lag = tmp_path / "lag.json"
    lag.write_text(json.dumps({"num": [1.0], "den": [1.0, 1.0]}))
    out = tmp_path / "out"
    assert main(["nyquist", "--plant", str(lag), "--out", str(out)]) == 0
    doc = json.loads((out / "regions.json").read_text())
    pts = [complex(p[0], p[1]) for p in doc["nyquist"]["samples"]]
    assert all(abs(abs(z - 0.5) - 0.5) < 1e-6 for z in pts)


def test_config_file_defaults_with_flag_override(unstable_file, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kp": 9.0, "kr": 1.0}))
    out = tmp_path / "out"
    # flag wins over the config value for kp; kr comes from the config
    code = main(
        ["analyze", "--plant", unstable_file, "--config", str(cfg),
         "--kp", "1.1", "--out", str(out)]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["kp"] == 1.1
    assert report["kr"] == 1.0
