"""Run a configured scenario and collect its per-snapshot diagnostics."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Optional

from .config import Experiment
from .diagnostics import (
    BoundsTracker, PerturbationField, energy_integral, perturbation_norms, sup_distance,
)
from .io import write_table
from .solver import SimField, Trajectory, far_field_sentinel, run


def snapshot_name(index: int) -> str:
    return f"snapshot_{index:05d}.csv"


def write_snapshot(path, exp: Experiment, f: SimField, digest: str) -> Path:
    sc = exp.scenario
    x = sc.grid.x
    tgt = sc.target.state(f.t, x)
    meta = {"t": float(f.t), "h": float(sc.grid.h), "config_hash": digest}
    cols = {"x": x, "rho": f.rho, "u": f.u, "theta": f.theta,
            "target_rho": tgt.rho, "target_u": tgt.u, "target_theta": tgt.theta}
    return write_table(path, meta, cols)


def snapshot_diagnostics(exp: Experiment, f: SimField) -> dict:
    sc = exp.scenario
    x = sc.grid.x
    norms = perturbation_norms(PerturbationField.against(f, sc.target, x), x)
    return {
        "t": float(f.t),
        "sup_distance": sup_distance(f, exp.reference, x, exp.time_shift),
        "energy_integral": energy_integral(sc.gas, f, sc.target, x),
        "l2": norms["combined"]["l2"],
        "h1": norms["combined"]["h1"],
        "sup": norms["combined"]["sup"],
        "tail_sup": norms["combined"]["tail_sup"],
    }


def _ratio(a: float, b: float) -> float:
    return a / b if b > 0 else float("nan")


def summarize(exp: Experiment, traj: Trajectory, tracker: BoundsTracker, digest: str,
              admissibility) -> dict:
    sc = exp.scenario
    rows = [snapshot_diagnostics(exp, f) for f in traj.snapshots]
    series = {k: [r[k] for r in rows] for k in rows[0]}
    for k in ("rho_min", "rho_max", "theta_min", "theta_max", "boundary_rho", "boundary_phi"):
        series[k] = [e.get(k, float("nan")) for e in tracker.per_snapshot]

    sup = series["sup_distance"]
    energy = series["energy_integral"]
    positive = [i for i, t in enumerate(series["t"]) if t > 0]
    first = positive[0] if positive else 0
    bounds = tracker.report()
    bounds.pop("per_snapshot")
    strengths = dict(admissibility.strengths)
    m1 = min(1.0, bounds["rho_min"])
    m2 = min(1.0, bounds["theta_min"])
    n_big = max(1.0, max(series["h1"]))
    total = sum(strengths.values())
    return {
        "config_hash": digest,
        "scenario": exp_kind(exp),
        "admissibility": {"conditions": dict(admissibility.conditions), "strengths": strengths},
        "grid": {"L": sc.grid.L, "N": sc.grid.N, "h": sc.grid.h},
        "time": {"t_end": sc.t_end, "cfl": sc.cfl, "time_shift": exp.time_shift},
        "run": {"steps": traj.steps, "completed": traj.completed},
        "series": series,
        "bounds": bounds,
        "far_field_sentinel": far_field_sentinel(sc),
        "checks": {
            "sup_distance_first": sup[first],
            "sup_distance_last": sup[-1],
            "sup_distance_ratio": _ratio(sup[-1], sup[first]),
            "energy_initial": energy[0],
            "energy_max_ratio": _ratio(max(energy), energy[0]),
            "tail_sup_max": max(series["tail_sup"]),
        },
        # smallness factors of the basic energy estimate; epsilon_0 is unknown
        "xi_factors": {
            "m1": m1, "m2": m2, "N": n_big,
            "log10_xi": 50.0 * (math.log10(n_big) - math.log10(m1) - math.log10(m2)),
            "strength_sum": total,
        },
    }


def exp_kind(exp: Experiment) -> str:
    t = type(exp.scenario.target).__name__
    return {"RarefactionWave": "rarefaction", "StationaryWave": "stationary",
            "SuperpositionWave": "superposition"}.get(t, t)


def run_experiment(exp: Experiment, admissibility, digest: str,
                   out_dir: Optional[Path] = None) -> tuple[Trajectory, dict]:
    sc = exp.scenario
    tracker = BoundsTracker(target=sc.target, snapshot_times=set(sc.schedule().tolist()))
    traj = run(sc, hooks=[tracker])
    summary = summarize(exp, traj, tracker, digest, admissibility)
    if out_dir is not None:
        for i, f in enumerate(traj.snapshots):
            write_snapshot(Path(out_dir) / snapshot_name(i), exp, f, digest)
    return traj, summary

