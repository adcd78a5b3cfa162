import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from nsoutflow.cli import main
from nsoutflow.io import read_record, read_stationary, read_table

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL = """
[endstates]
rho_plus = 1.0
u_plus = 0.0
theta_plus = 1.0
theta_minus = 0.95
[grid]
L = 40.0
N = 200
[time]
t_end = 1.0
snapshot_every = 0.5
[perturbation]
shape = gaussian-bump
amp_rho = 0.05
amp_u = 0.05
amp_theta = 0.05
center = 10.0
width = 3.0
"""


@pytest.fixture
def small(tmp_path):
    p = tmp_path / "small.ini"
    p.write_text(SMALL)
    return p


def _cfg(tmp_path, text, name="c.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_construct_rarefaction(small, tmp_path):
    out = tmp_path / "out"
    assert main(["construct", "--kind", "smoothed", "--config", str(small), "--out", str(out), "--quiet"]) == 0
    meta, cols = read_table(out / "construct_smoothed.csv")
    assert meta["kind"] == "smoothed" and len(meta["config_hash"]) == 16
    assert cols["x"].size == 201 and cols["u"][0] == pytest.approx(float(read_record(
        out / "rarefaction_parameters.txt")["left_u"]))


def test_construct_stationary_boundary_row(tmp_path):
    out = tmp_path / "out"
    cfg = str(CONFIGS / "stationary_supersonic.ini")
    assert main(["construct", "--kind", "stationary", "--config", cfg, "--out", str(out), "--quiet"]) == 0
    _, cols = read_table(out / "construct_stationary.csv")
    w = read_stationary(out / "stationary_profile.csv")
    assert cols["u"][0] == w.u_minus and cols["theta"][0] == w.theta_minus
    assert cols["rho"][0] * cols["u"][0] == pytest.approx(w.mass_flux, rel=1e-12)


def test_output_dir_from_environment(small, tmp_path, monkeypatch):
    monkeypatch.setenv("OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["construct", "--kind", "rarefaction", "--t", "2", "--config", str(small), "--quiet"]) == 0
    assert (tmp_path / "env" / "construct_rarefaction.csv").exists()


def test_simulate_outputs_and_determinism(small, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", str(small), "--out", str(a), "--quiet"]) == 0
    assert main(["simulate", "--config", str(small), "--out", str(b), "--quiet"]) == 0
    files = sorted(p.name for p in a.iterdir())
    assert "summary.json" in files and len([f for f in files if f.endswith(".csv")]) == 3
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    summary = json.loads((a / "summary.json").read_text())
    assert summary["series"]["t"] == [0.0, 0.5, 1.0]
    assert summary["config_hash"] == read_table(a / files[0])[0]["config_hash"]


def test_inflow_rejected(tmp_path, capsys):
    cfg = _cfg(tmp_path, "[endstates]\nu_minus = 0.1\ntheta_minus = 0.9\n")
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path)]) == 1
    assert "inflow" in capsys.readouterr().err


def test_admissibility_violation_named(tmp_path, capsys):
    # supersonic far field with u_minus off the wall: boundary sound-speed bound fails
    cfg = _cfg(tmp_path, "[endstates]\nu_plus = -2.0\ntheta_minus = 0.9\n")
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "admissibility condition violated" in err


def test_exact_fan_at_time_zero_rejected(small, tmp_path):
    assert main(["construct", "--kind", "rarefaction", "--config", str(small), "--out", str(tmp_path)]) == 1


def test_unknown_key_and_missing_file(tmp_path):
    assert main(["construct", "--kind", "smoothed", "--config", _cfg(tmp_path, "[grid]\nM = 3\n")]) == 1
    assert main(["construct", "--kind", "smoothed", "--config", str(tmp_path / "nope.ini")]) == 1


def test_no_layer_exit_code(tmp_path):
    cfg = _cfg(tmp_path, "[scenario]\nkind = stationary\n[endstates]\nrho_m = 1\nu_m = -0.3\n"
                         "theta_m = 1\nu_minus = -0.305\ntheta_minus = 1.0\n")
    assert main(["construct", "--kind", "stationary", "--config", cfg, "--out", str(tmp_path)]) == 1


def test_abort_exit_code(small, tmp_path, monkeypatch, capsys):
    import nsoutflow.solver as solver
    monkeypatch.setattr(solver, "cfl_timestep", lambda sc, f: 0.5)  # 25x the diffusive limit
    cfg = _cfg(tmp_path, SMALL.replace("t_end = 1.0", "t_end = 20.0"))
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o"), "--quiet"]) == 2
    assert "aborted" in capsys.readouterr().err


def test_verify_exit_codes(tmp_path):
    assert main(["verify", "entropy", "--quiet", "--config",
                 _cfg(tmp_path, "[verify]\nentropy_samples = 1000\n")]) == 0
    bad = _cfg(tmp_path, "[verify]\norder_min = 5.0\n", "bad.ini")
    assert main(["verify", "srw", "--quiet", "--config", bad]) == 3


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "nsoutflow", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "construct" in r.stdout
