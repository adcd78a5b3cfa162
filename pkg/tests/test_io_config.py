import hashlib
import json
import math

import numpy as np
import pytest

from nsoutflow.config import (
    DEFAULTS, build_endstates, build_experiment, build_pattern, canonical_text, check_admissibility,
    load_config, parse_config, snapshot_times,
)
from nsoutflow.errors import ConfigError
from nsoutflow.gas import FluidState, GasModel
from nsoutflow.io import (
    format_float, rarefaction_from_record, rarefaction_record, read_record, read_stationary,
    read_table, write_json, write_record, write_stationary, write_table,
)
from nsoutflow.waves import RarefactionWave, r3_connect, r3_connect_right, stationary_solve

GAS = GasModel()


def test_format_float_roundtrips():
    for v in (0.1, 1 / 3, -1e-300, 2.0**60 + 1, math.pi):
        assert float(format_float(v)) == v


def test_table_roundtrip(tmp_path):
    x = np.linspace(0, 1, 7) / 3
    p = write_table(tmp_path / "a" / "t.csv", {"t": 0.1, "name": "abc"}, {"x": x, "y": x**2})
    meta, cols = read_table(p)
    assert meta == {"t": "0.10000000000000001", "name": "abc"}
    assert np.array_equal(cols["x"], x) and np.array_equal(cols["y"], x**2)
    with pytest.raises(Exception):
        write_table(tmp_path / "bad.csv", {}, {"x": x, "y": x[:-1]})


def test_record_and_rarefaction_roundtrip(tmp_path):
    left = FluidState(0.9, -0.2, 0.95)
    w = RarefactionWave(GAS, left, r3_connect_right(GAS, left, 1.0), "exact")
    p = write_record(tmp_path / "r.txt", rarefaction_record(w))
    back = rarefaction_from_record(read_record(p))
    assert back.left == w.left and back.right == w.right
    assert back.mode == "exact" and back.q == w.q


def test_stationary_roundtrip(tmp_path):
    end = FluidState(1.0, -1.5 * math.sqrt(1.4), 1.0)
    w = stationary_solve(GAS, (-1.7394685958705574, 1.0353553390593273), end, n_samples=2001)
    back = read_stationary(write_stationary(tmp_path / "s.csv", w, {"config_hash": "x"}))
    assert np.array_equal(back.x, w.x) and np.array_equal(back.u, w.u)
    assert back.regime == w.regime and back.decay_c == w.decay_c
    xs = np.linspace(0, 30, 97)
    assert np.array_equal(back.state(0.0, xs).theta, w.state(0.0, xs).theta)


def test_write_json_sorted_and_stable(tmp_path):
    obj = {"b": np.float64(1.5), "a": [np.int64(2), np.array([0.25])], "c": (1, None)}
    p1 = write_json(tmp_path / "1.json", obj)
    p2 = write_json(tmp_path / "2.json", dict(reversed(list(obj.items()))))
    assert p1.read_bytes() == p2.read_bytes()
    assert list(json.loads(p1.read_text())) == ["a", "b", "c"]


def test_defaults_parse_and_hash():
    cfg = parse_config("")
    assert cfg.kind == "rarefaction" and cfg.gas == GAS
    assert cfg.digest == hashlib.sha256(canonical_text(DEFAULTS).encode()).hexdigest()[:16]
    assert len(cfg.digest) == 16


def test_hash_ignores_layout_but_not_values():
    a = parse_config("[gas]\ngamma = 1.4\n# comment\n[grid]\nN = 1000\n")
    b = parse_config("[grid]\nN=1000 ; trailing\n\n[gas]\n  gamma =   1.4\n")
    c = parse_config("[grid]\nN = 1001\n")
    assert a.digest == b.digest == parse_config("").digest
    assert c.digest != a.digest


@pytest.mark.parametrize("text", [
    "[nope]\nx = 1\n",
    "[gas]\ngama = 1.4\n",
    "[gas]\ngamma = abc\n",
    "[gas]\ngamma = 1.0\n",
    "[grid]\nN = 10.5\n",
    "[scenario]\nkind = shock\n",
    "[gas]\nR = inf\n",
    "not an ini file",
])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini")


def test_auto_u_minus_on_curve():
    cfg = parse_config("[endstates]\ntheta_minus = 0.8\n")
    st = build_endstates(cfg)
    _, u = r3_connect(GAS, FluidState(1.0, 0.0, 1.0), 0.8)
    assert st.u_minus == u and st.theta_minus == 0.8
    assert check_admissibility(cfg, st).ok


def test_auto_theta_minus_subsonic():
    cfg = parse_config("[scenario]\nkind = stationary\n[endstates]\nrho_m = 1\nu_m = -0.3\n"
                       "theta_m = 1\nu_minus = -0.305\ntheta_minus = auto\n")
    st = build_endstates(cfg)
    assert st.theta_minus == pytest.approx(1.0202005462971657, abs=1e-10)
    with pytest.raises(ConfigError):
        build_endstates(parse_config(
            "[scenario]\nkind = stationary\n[endstates]\nrho_m = 1\nu_m = -2\n"
            "theta_m = 1\nu_minus = -2.01\ntheta_minus = auto\n"))


def test_superposition_auto_right_state():
    cfg = parse_config("[scenario]\nkind = superposition\n[endstates]\nrho_m = 1\nu_m = -0.6\n"
                       "theta_m = 1\nu_minus = -0.6161582637860055\ntheta_minus = 1.0473171270414188\n"
                       "theta_plus = 1.032255269861918\nrho_plus = auto\nu_plus = auto\n")
    st = build_endstates(cfg)
    assert st.right == r3_connect_right(GAS, st.middle, 1.032255269861918)
    assert build_pattern(cfg, "superposition-check", st).rarefaction.mode == "exact"
    with pytest.raises(ConfigError):
        build_pattern(parse_config(""), "superposition")


def test_missing_middle_state():
    with pytest.raises(ConfigError):
        build_endstates(parse_config("[scenario]\nkind = stationary\n[endstates]\nu_minus = -0.1\n"))


def test_snapshot_times():
    cfg = parse_config("[time]\nt_end = 2.5\nsnapshot_every = 1\n")
    assert list(snapshot_times(cfg)) == [0.0, 1.0, 2.0, 2.5]
    with pytest.raises(ConfigError):
        snapshot_times(parse_config("[time]\nsnapshot_every = 0\n"))


def test_experiment_from_shipped_configs(tmp_path):
    from pathlib import Path
    root = Path(__file__).resolve().parents[1] / "configs"
    exp = build_experiment(load_config(root / "rarefaction.ini"))
    assert exp.time_shift == 1.0 and exp.reference.mode == "exact"
    assert exp.scenario.grid.N == 4000
    exp = build_experiment(load_config(root / "stationary_supersonic.ini"))
    assert exp.time_shift == 0.0 and exp.reference is exp.scenario.target
