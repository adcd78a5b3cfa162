"""Sectioned ``key = value`` configuration files.

Grammar (parsed with :mod:`configparser`, ``#`` and ``;`` start comments)::

    [scenario]      kind = rarefaction | stationary | superposition
    [gas]           R, gamma, mu, kappa
    [endstates]     rho_plus, u_plus, theta_plus      far-field state
                    u_minus, theta_minus              boundary data
                    rho_m, u_m, theta_m               middle state
    [burgers]       q, w_minus, w_plus
    [stationary]    x_max, tol, rtol, n_samples, delta0
    [grid]          L, N
    [time]          t_end, cfl, max_steps, snapshot_every
    [perturbation]  shape, amp_rho, amp_u, amp_theta, center, width
    [verify]        tolerances of the verification suites

Numeric values may be ``auto`` where noted: ``u_minus`` of a rarefaction
(taken from the 3-rarefaction curve), ``theta_minus`` of a subsonic layer
(found by shooting), ``rho_plus``/``u_plus`` of a superposition (placed on the
curve through the middle state), ``x_max``/``delta0`` of the layer solver.
Unknown sections or keys are errors.
"""
from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, ValidationError
from .gas import EndStates, FluidState, GasModel
from .solver import Grid, Perturbation, Scenario
from .waves import (
    COND_OUTFLOW, AdmissibilityReport, RarefactionWave, StationaryWave, SuperpositionWave,
    admissibility_check, classify_regime, r3_connect, r3_connect_right, stationary_solve,
    stationary_stable_boundary,
)

AUTO = "auto"
KINDS = ("rarefaction", "stationary", "superposition")

DEFAULTS: dict[str, dict[str, str]] = {
    "scenario": {"kind": "rarefaction"},
    "gas": {"R": "1.0", "gamma": "1.4", "mu": "1.0", "kappa": "1.0"},
    "endstates": {
        "rho_plus": "1.0", "u_plus": "0.0", "theta_plus": "1.0",
        "u_minus": AUTO, "theta_minus": "0.9",
        "rho_m": "", "u_m": "", "theta_m": "",
    },
    "burgers": {"q": "16", "w_minus": "-1.0", "w_plus": "1.0"},
    "stationary": {"x_max": AUTO, "tol": "1e-8", "rtol": "1e-10", "n_samples": "20001",
                   "delta0": AUTO},
    "grid": {"L": "100.0", "N": "1000"},
    "time": {"t_end": "10.0", "cfl": "0.9", "max_steps": "10000000", "snapshot_every": "1.0"},
    "perturbation": {"shape": "none", "amp_rho": "0.0", "amp_u": "0.0", "amp_theta": "0.0",
                     "center": "20.0", "width": "5.0"},
    "verify": {
        "slope_tol": "0.1", "slope_tol_second": "0.15", "plateau_factor": "1.5",
        "order_min": "1.9", "residual_tol": "1e-6", "rel_tol": "1e-10",
        "decay_h": "0.05", "decay_t_min": "10.0", "decay_t_max": "1000.0",
        "decay_samples": "8", "srw_h": "0.4", "srw_t": "5.0",
        "entropy_samples": "100000", "seed": "20240601",
    },
}


def _float(section: str, key: str, raw: str, allow_auto: bool = False) -> Optional[float]:
    raw = raw.strip()
    if allow_auto and raw.lower() == AUTO:
        return None
    if raw == "":
        return None
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"[{section}] {key}: value must be finite")
    return v


def _int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected an integer, got {raw!r}") from None


@dataclass(frozen=True)
class Config:
    values: dict
    digest: str
    source: Optional[str] = None

    def get(self, section: str, key: str) -> str:
        return self.values[section][key]

    def num(self, section: str, key: str, allow_auto: bool = False) -> Optional[float]:
        return _float(section, key, self.get(section, key), allow_auto)

    def req(self, section: str, key: str) -> float:
        v = self.num(section, key)
        if v is None:
            raise ConfigError(f"[{section}] {key} is required for this scenario")
        return v

    def integer(self, section: str, key: str) -> int:
        return _int(section, key, self.get(section, key))

    @property
    def kind(self) -> str:
        return self.get("scenario", "kind")

    @property
    def gas(self) -> GasModel:
        try:
            return GasModel(*(self.req("gas", k) for k in ("R", "gamma", "mu", "kappa")))
        except ValidationError as exc:
            raise ConfigError(f"[gas] {exc}") from None

    def canonical(self) -> str:
        return canonical_text(self.values)


def canonical_text(values: dict) -> str:
    lines = []
    for sec in sorted(values):
        lines.append(f"[{sec}]")
        lines.extend(f"{k} = {values[sec][k]}" for k in sorted(values[sec]))
    return "\n".join(lines) + "\n"


def parse_config(text: str, source: Optional[str] = None) -> Config:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    parser.optionxform = str  # keys are case sensitive (R vs r)
    try:
        parser.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    values = {sec: dict(keys) for sec, keys in DEFAULTS.items()}
    for sec in parser.sections():
        if sec not in DEFAULTS:
            raise ConfigError(f"unknown section [{sec}]")
        for key, raw in parser.items(sec):
            if key not in DEFAULTS[sec]:
                raise ConfigError(f"unknown key {key!r} in [{sec}]")
            values[sec][key] = raw.strip()
    if values["scenario"]["kind"] not in KINDS:
        raise ConfigError(f"[scenario] kind must be one of {KINDS}, got {values['scenario']['kind']!r}")
    digest = hashlib.sha256(canonical_text(values).encode()).hexdigest()[:16]
    cfg = Config(values, digest, source)
    _validate_types(cfg)
    return cfg


def _validate_types(cfg: Config) -> None:
    cfg.gas
    for key in ("rho_plus", "u_plus", "theta_plus", "u_minus", "theta_minus",
                "rho_m", "u_m", "theta_m"):
        cfg.num("endstates", key, allow_auto=True)
    for sec, keys in (("burgers", ("w_minus", "w_plus")), ("stationary", ("tol", "rtol")),
                      ("grid", ("L",)), ("time", ("t_end", "cfl", "snapshot_every")),
                      ("perturbation", ("amp_rho", "amp_u", "amp_theta", "center", "width"))):
        for k in keys:
            cfg.req(sec, k)
    for sec, k in (("stationary", "x_max"), ("stationary", "delta0")):
        cfg.num(sec, k, allow_auto=True)
    for sec, k in (("burgers", "q"), ("stationary", "n_samples"), ("grid", "N"),
                   ("time", "max_steps"), ("verify", "decay_samples"),
                   ("verify", "entropy_samples"), ("verify", "seed")):
        cfg.integer(sec, k)
    for k in DEFAULTS["verify"]:
        if k not in ("decay_samples", "entropy_samples", "seed"):
            cfg.req("verify", k)


def load_config(path) -> Config:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(p))


# --------------------------------------------------------------------------
# builders


def _state(cfg: Config, suffix: str) -> FluidState:
    try:
        return FluidState(*(cfg.req("endstates", f"{c}_{suffix}") for c in ("rho", "u", "theta")))
    except ValidationError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[endstates] {exc}") from None


def middle_state(cfg: Config) -> FluidState:
    return _state(cfg, "m")


def resolve_theta_minus(cfg: Config, middle: FluidState, u_minus: float) -> float:
    theta = cfg.num("endstates", "theta_minus", allow_auto=True)
    if theta is not None:
        return theta
    gas = cfg.gas
    if classify_regime(gas, middle) != "subsonic":
        raise ConfigError("theta_minus = auto is only defined for a subsonic far field")
    return stationary_stable_boundary(gas, middle, u_minus)


def build_endstates(cfg: Config) -> EndStates:
    gas, kind = cfg.gas, cfg.kind
    try:
        if kind == "rarefaction":
            right = _state(cfg, "plus")
            theta_minus = cfg.req("endstates", "theta_minus")
            u_minus = cfg.num("endstates", "u_minus", allow_auto=True)
            if u_minus is None:
                _, u_minus = r3_connect(gas, right, theta_minus)
            return EndStates(u_minus, theta_minus, right)
        middle = middle_state(cfg)
        u_minus = cfg.req("endstates", "u_minus")
        theta_minus = resolve_theta_minus(cfg, middle, u_minus)
        if kind == "stationary":
            return EndStates(u_minus, theta_minus, middle, middle)
        theta_plus = cfg.req("endstates", "theta_plus")
        rho_p = cfg.num("endstates", "rho_plus", allow_auto=True)
        u_p = cfg.num("endstates", "u_plus", allow_auto=True)
        if rho_p is None or u_p is None:
            right = r3_connect_right(gas, middle, theta_plus)
        else:
            right = FluidState(rho_p, u_p, theta_plus)
        return EndStates(u_minus, theta_minus, right, middle)
    except ValidationError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def check_admissibility(cfg: Config, states: EndStates) -> AdmissibilityReport:
    """Structural hypotheses for the configured scenario (a pure layer only needs outflow)."""
    if cfg.kind == "stationary":
        m = states.middle
        delta = math.hypot(states.u_minus - m.u, states.theta_minus - m.theta)
        return AdmissibilityReport("stationary", {COND_OUTFLOW: states.u_minus <= 0},
                                   {"delta_tilde": delta})
    return admissibility_check(cfg.gas, states, cfg.kind)


def stationary_options(cfg: Config) -> dict:
    return {
        "x_max": cfg.num("stationary", "x_max", allow_auto=True),
        "tol": cfg.req("stationary", "tol"),
        "rtol": cfg.req("stationary", "rtol"),
        "n_samples": cfg.integer("stationary", "n_samples"),
        "delta0": cfg.num("stationary", "delta0", allow_auto=True),
    }


def build_stationary(cfg: Config, states: EndStates) -> StationaryWave:
    middle = states.middle if states.middle is not None else states.right
    return stationary_solve(cfg.gas, (states.u_minus, states.theta_minus), middle,
                            **stationary_options(cfg))


def build_rarefaction(cfg: Config, states: EndStates, mode: str = "smoothed") -> RarefactionWave:
    gas = cfg.gas
    q = cfg.integer("burgers", "q")
    if states.middle is not None:
        return RarefactionWave(gas, states.middle, states.right, mode, q)
    rho_minus, _ = r3_connect(gas, states.right, states.theta_minus)
    left = FluidState(rho_minus, states.u_minus, states.theta_minus)
    return RarefactionWave(gas, left, states.right, mode, q)


def build_pattern(cfg: Config, kind: str, states: Optional[EndStates] = None):
    """Wave pattern named by ``kind``: rarefaction (exact fan), smoothed,
    stationary, superposition (smoothed) or superposition-check (exact fan)."""
    states = build_endstates(cfg) if states is None else states
    if kind in ("rarefaction", "smoothed"):
        if states.middle is not None and cfg.kind == "stationary":
            raise ConfigError("a stationary scenario has no rarefaction part")
        return build_rarefaction(cfg, states, "exact" if kind == "rarefaction" else "smoothed")
    if kind == "stationary":
        if states.middle is None:
            raise ConfigError("stationary pattern needs the middle state rho_m, u_m, theta_m")
        return build_stationary(cfg, states)
    if kind in ("superposition", "superposition-check"):
        if cfg.kind != "superposition":
            raise ConfigError("superposition pattern needs [scenario] kind = superposition")
        sw = build_stationary(cfg, states)
        rw = build_rarefaction(cfg, states)
        return SuperpositionWave(sw, rw, "check" if kind.endswith("check") else "hat")
    raise ConfigError(f"unknown pattern kind {kind!r}")


def build_grid(cfg: Config) -> Grid:
    try:
        return Grid(cfg.req("grid", "L"), cfg.integer("grid", "N"))
    except ValidationError as exc:
        raise ConfigError(f"[grid] {exc}") from None


def build_perturbation(cfg: Config) -> Perturbation:
    p = {k: cfg.req("perturbation", k) for k in ("amp_rho", "amp_u", "amp_theta", "center", "width")}
    return Perturbation(cfg.get("perturbation", "shape"), **p)


def snapshot_times(cfg: Config) -> np.ndarray:
    t_end = cfg.req("time", "t_end")
    every = cfg.req("time", "snapshot_every")
    if not every > 0:
        raise ConfigError("[time] snapshot_every must be positive")
    n = int(math.floor(t_end / every + 1e-9))
    return np.array([k * every for k in range(n + 1)] + [t_end])


@dataclass(frozen=True, eq=False)
class Experiment:
    """A scenario plus the pattern its convergence is measured against."""

    scenario: Scenario
    states: EndStates
    reference: object
    time_shift: float


def build_experiment(cfg: Config, states: Optional[EndStates] = None) -> Experiment:
    states = build_endstates(cfg) if states is None else states
    kind = cfg.kind
    if kind == "rarefaction":
        target = build_pattern(cfg, "smoothed", states)
        reference, shift = target.with_mode("exact"), 1.0
    elif kind == "stationary":
        target = reference = build_pattern(cfg, "stationary", states)
        shift = 0.0
    else:
        target = build_pattern(cfg, "superposition", states)
        reference, shift = target.with_kind("check"), 1.0
    sc = Scenario(
        cfg.gas, build_grid(cfg), target, build_perturbation(cfg),
        t_end=cfg.req("time", "t_end"), cfl=cfg.req("time", "cfl"),
        max_steps=cfg.integer("time", "max_steps"),
        snapshot_times=tuple(snapshot_times(cfg)), tag=cfg.digest,
    )
    return Experiment(sc, states, reference, shift)
