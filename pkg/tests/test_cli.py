import csv
import io
import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from succmeas.cli import ScenarioConfig, validate
from succmeas.probe import gaussian


def run_cli(*args, check_code=0):
    cp = subprocess.run([sys.executable, "-m", "succmeas.cli", *args],
                        capture_output=True, text=True)
    assert cp.returncode == check_code, cp.stderr
    return cp


def test_schwinger_table_csv():
    out = run_cli("schwinger", "table").stdout
    lines = out.split("\n")
    assert lines[0] == "N,delta_p,L,R,holds"
    assert lines[1] == "6,2,0.333333333333,0.166666666667,true"
    assert len([l for l in lines if l]) == 7
    assert "\r" not in out


def test_schwinger_table_custom_rows_matrix_route():
    out = run_cli("schwinger", "table", "--rows", "15:4,6:2", "--method", "matrix").stdout
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["N"] for r in rows] == ["6", "15"]
    assert float(rows[1]["R"]) == pytest.approx(0.0769493, abs=1e-7)


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        run_cli("wigner", "sweep", "--function", "fourier", "--state", "gaussian",
                "--format", "json", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_continuum_sinc_json_round_trip(tmp_path):
    path = tmp_path / "sinc.json"
    run_cli("continuum", "sinc", "--delta-p", "0.1", "--format", "json", "--out", str(path))
    text = path.read_text(encoding="utf-8")
    data = json.loads(text)
    assert round(data["delta_x"], 3) == 125.664
    assert round(data["product"], 3) == 12.566
    assert data["verified"] is True
    assert json.dumps(data, sort_keys=True, indent=2) + "\n" == text
    assert list(data) == sorted(data)


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 9, "delta_p": 2, "format": "json"}))
    data = json.loads(run_cli("schwinger", "dist", "--config", str(cfg)).stdout)
    assert data["N"] == 9 and data["width"] == "8/3"
    out = run_cli("schwinger", "dist", "--config", str(cfg), "--n", "6", "--format", "csv").stdout
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["q", "weight"] and len(rows) == 7
    assert float(rows[1][1]) == pytest.approx(0.5)


def test_probe_sim_matches_two_gaussian_form():
    out = run_cli("probe", "sim", "--points", "41").stdout
    rows = np.array(list(csv.reader(io.StringIO(out)))[1:], dtype=float)
    q2, dens = rows[:, 0], rows[:, 1]
    expected = 0.5 * gaussian(q2, 1.0, 0.5) + 0.5 * gaussian(q2, -1.0, 0.5)
    assert np.max(np.abs(dens - expected)) < 1e-10


def test_wigner_sweep_commuting_widths():
    for func in ("identity", "square"):
        rows = list(csv.DictReader(io.StringIO(run_cli("wigner", "sweep", "--function", func).stdout)))
        assert [float(r["width_count"]) for r in rows] == [0.0, 2.0, 4.0]


def test_continuum_theta_csv_columns():
    out = run_cli("continuum", "theta", "--theta", "pi/2", "--delta-xprime", "2").stdout
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["theta", "delta_xprime", "delta_x", "method", "product"]
    assert rows[0]["method"] == "first_zero"
    assert float(rows[0]["delta_x"]) == pytest.approx(2 * np.pi, rel=1e-6)


def test_appendix_c_check_passes_and_accuracy_exit():
    rows = list(csv.DictReader(io.StringIO(run_cli("appendix-c", "check").stdout)))
    assert all(r["d_ok"] == "true" and r["n_ok"] == "true" for r in rows)
    cp = run_cli("appendix-c", "check", "--tol", "1e-6", check_code=3)
    assert cp.stderr.count("\n") == 1
    assert cp.stderr.startswith("succmeas: error=accuracy ")


def test_sinc_accuracy_exit_code():
    cp = run_cli("continuum", "sinc", "--tol", "1e-12", check_code=3)
    assert "error=accuracy" in cp.stderr


@pytest.mark.parametrize("args, message", [
    (("wigner", "sweep", "--delta-a", "3"), "resolution must be even"),
    (("schwinger", "table", "--rows", "7:2"), "dimension incompatible with resolution"),
    (("continuum", "theta", "--theta", "0"), "theta must lie in the open interval"),
    (("appendix-c", "check", "--delta-p", "0.9"), "series regime"),
    (("schwinger", "bogus"), "invalid choice"),
])
def test_validation_exit_code(args, message):
    cp = run_cli(*args, check_code=2)
    assert cp.stderr.count("\n") == 1
    assert cp.stderr.startswith("succmeas: error=validation ")
    assert message in cp.stderr
    assert cp.stdout == ""


def test_bad_config_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    cp = run_cli("schwinger", "table", "--config", str(bad), check_code=2)
    assert "cannot read config" in cp.stderr


def test_validate_examples():
    assert validate(ScenarioConfig("wigner-sweep", {"delta_a": [3]})) == ["resolution must be even"]
    assert validate(ScenarioConfig("schwinger-table", {"rows": [[7, 2]]})) == \
        ["dimension incompatible with resolution"]
    assert validate(ScenarioConfig("schwinger-table")) == []
    assert validate(ScenarioConfig("continuum-theta", {"theta": [0.0]})) == \
        ["theta must lie in the open interval (0, pi)"]
    assert validate(ScenarioConfig("nonsense")) == ["unknown scenario kind 'nonsense'"]
    assert validate(ScenarioConfig("schwinger-dist", {"n": "x"})) == ["N must be an integer"]


def test_console_script_installed():
    exe = shutil.which("succmeas")
    if exe is None:
        pytest.skip("console script not on PATH")
    cp = subprocess.run([exe, "schwinger", "table", "--rows", "6:2"], capture_output=True, text=True)
    assert cp.returncode == 0 and "6,2,0.333333333333" in cp.stdout
