"""Plain-text tabular and record formats.

Tables are comma-separated with a block of ``# key = value`` metadata lines
on top, then one header row, then data rows.  Floats are written with 17
significant digits so every value round-trips bit for bit.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ValidationError
from .gas import FluidState, GasModel
from .waves import RarefactionWave, StationaryWave

FLOAT_FMT = "%.17g"


def format_float(v: float) -> str:
    return FLOAT_FMT % float(v)


def _format_meta(value) -> str:
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, tuple)):
        return json.dumps([_format_meta(v) if isinstance(v, float) else v for v in value])
    return str(value)


def write_table(path, meta: Mapping, columns: Mapping[str, np.ndarray]) -> Path:
    path = Path(path)
    names = list(columns)
    data = [np.asarray(columns[n], dtype=float) for n in names]
    if len({d.size for d in data}) > 1:
        raise ValidationError("table columns must have equal length")
    lines = [f"# {k} = {_format_meta(v)}" for k, v in meta.items()]
    lines.append(",".join(names))
    for row in zip(*data):
        lines.append(",".join(FLOAT_FMT % v for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_table(path) -> tuple[dict, dict]:
    meta: dict[str, str] = {}
    header = None
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if not sep:
                raise ValidationError(f"malformed metadata line {line!r}")
            meta[key.strip()] = value.strip()
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ValidationError(f"{path}: no header row")
    arr = np.array(rows, dtype=float).reshape(-1, len(header))
    return meta, {name: arr[:, i].copy() for i, name in enumerate(header)}


def write_record(path, record: Mapping) -> Path:
    """``key = value`` lines, one per parameter."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{k} = {_format_meta(v)}\n" for k, v in record.items()))
    return path


def read_record(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        if line.strip():
            k, _, v = line.partition("=")
            out[k.strip()] = v.strip()
    return out


# --------------------------------------------------------------------------
# wave patterns


def _gas_record(gas: GasModel) -> dict:
    return {"R": gas.R, "gamma": gas.gamma, "mu": gas.mu, "kappa": gas.kappa}


def _gas_from(meta: Mapping) -> GasModel:
    return GasModel(float(meta["R"]), float(meta["gamma"]), float(meta["mu"]), float(meta["kappa"]))


def rarefaction_record(w: RarefactionWave) -> dict:
    rec = {"pattern": "rarefaction", "mode": w.mode, "q": w.q}
    rec.update(_gas_record(w.gas))
    for side, s in (("left", w.left), ("right", w.right)):
        rec.update({f"{side}_rho": s.rho, f"{side}_u": s.u, f"{side}_theta": s.theta})
    return rec


def rarefaction_from_record(rec: Mapping) -> RarefactionWave:
    if rec.get("pattern") != "rarefaction":
        raise ValidationError("not a rarefaction record")

    def state(side):
        return FluidState(*(float(rec[f"{side}_{c}"]) for c in ("rho", "u", "theta")))
    return RarefactionWave(_gas_from(rec), state("left"), state("right"), rec["mode"], int(rec["q"]))


def write_stationary(path, w: StationaryWave, extra: Mapping = ()) -> Path:
    meta = dict(extra)
    meta.update({"pattern": "stationary", "regime": w.regime})
    meta.update(_gas_record(w.gas))
    meta.update({
        "u_minus": w.u_minus, "theta_minus": w.theta_minus,
        "rho_m": w.endstate.rho, "u_m": w.endstate.u, "theta_m": w.endstate.theta,
        "mass_flux": w.mass_flux, "strength": w.strength,
        "terminal_distance": w.terminal_distance,
        "decay_model": w.decay_model, "decay_C": w.decay_C, "decay_c": w.decay_c,
        "decay_r2": w.decay_r2,
    })
    return write_table(path, meta, {"x": w.x, "rho": w.rho, "u": w.u, "theta": w.theta})


def read_stationary(path) -> StationaryWave:
    meta, cols = read_table(path)
    if meta.get("pattern") != "stationary":
        raise ValidationError(f"{path}: not a stationary profile")
    end = FluidState(float(meta["rho_m"]), float(meta["u_m"]), float(meta["theta_m"]))

    def f(key):
        return float(meta[key])
    return StationaryWave(
        _gas_from(meta), f("u_minus"), f("theta_minus"), end,
        cols["x"], cols["rho"], cols["u"], cols["theta"], meta["regime"],
        f("terminal_distance"), f("decay_C"), f("decay_c"), f("decay_r2"), meta["decay_model"],
    )


def write_json(path, obj) -> Path:
    """Sorted keys, no timestamps: identical inputs give identical bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj
