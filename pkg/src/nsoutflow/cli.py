"""Command-line front end: ``construct``, ``simulate`` and ``verify``.

Exit codes: 0 success, 1 configuration or validation failure, 2 runtime
abort (non-positive or non-finite state), 3 verification failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import (
    Config, build_endstates, build_experiment, build_grid, build_pattern, check_admissibility,
    load_config, parse_config,
)
from .errors import (
    ConfigError, RootBracketError, ShootingError, SimulationAbort, StationaryDivergence,
    ValidationError,
)
from .experiment import run_experiment
from .io import rarefaction_record, write_json, write_record, write_stationary, write_table
from .verify import SUITES
from .waves import RarefactionWave, StationaryWave, SuperpositionWave

EXIT_OK, EXIT_CONFIG, EXIT_ABORT, EXIT_VERIFY = 0, 1, 2, 3
CONSTRUCT_KINDS = ("rarefaction", "smoothed", "stationary", "superposition")
INFLOW_MESSAGE = "u_minus > 0 is the inflow problem, which is not supported"


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


def _config(args) -> Config:
    return load_config(args.config) if args.config else parse_config("")


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get("OUTPUT_DIR") or "output")


def _write_pattern_files(out: Path, pattern, digest: str) -> list[Path]:
    files = []
    if isinstance(pattern, StationaryWave):
        files.append(write_stationary(out / "stationary_profile.csv", pattern, {"config_hash": digest}))
    elif isinstance(pattern, RarefactionWave):
        rec = {"config_hash": digest, **rarefaction_record(pattern)}
        files.append(write_record(out / "rarefaction_parameters.txt", rec))
    elif isinstance(pattern, SuperpositionWave):
        files += _write_pattern_files(out, pattern.stationary, digest)
        files += _write_pattern_files(out, pattern.rarefaction, digest)
    return files


def cmd_construct(args) -> int:
    cfg = _config(args)
    pattern = build_pattern(cfg, args.kind)
    x = build_grid(cfg).x
    s = pattern.state(args.t, x)
    out = _out_dir(args)
    meta = {"config_hash": cfg.digest, "kind": args.kind, "t": float(args.t)}
    path = write_table(out / f"construct_{args.kind}.csv", meta,
                       {"x": x, "rho": s.rho, "u": s.u, "theta": s.theta})
    extra = _write_pattern_files(out, pattern, cfg.digest)
    _say(args, f"wrote {path}")
    for p in extra:
        _say(args, f"wrote {p}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _config(args)
    states = build_endstates(cfg)
    if states.u_minus > 0:
        raise ConfigError(INFLOW_MESSAGE)
    report = check_admissibility(cfg, states)
    if not report.ok:
        raise ConfigError("admissibility condition violated: " + "; ".join(report.failures()))
    exp = build_experiment(cfg, states)
    out = _out_dir(args)
    _, summary = run_experiment(exp, report, cfg.digest, out)
    write_json(out / "summary.json", summary)
    c = summary["checks"]
    _say(args, f"steps {summary['run']['steps']}, sup distance {c['sup_distance_first']:.6g} -> "
               f"{c['sup_distance_last']:.6g}, max energy ratio {c['energy_max_ratio']:.6g}")
    _say(args, f"wrote {len(summary['series']['t'])} snapshots and summary.json to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    checks = SUITES[args.suite](cfg)
    for c in checks:
        _say(args, c.line())
    failed = [c for c in checks if not c.passed]
    _say(args, f"{args.suite}: {len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="configuration file (defaults if omitted)")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")

    parser = argparse.ArgumentParser(
        prog="nsoutflow",
        description="Wave patterns and stability experiments for the half-line outflow problem.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="sample a wave pattern on the grid")
    p.add_argument("--kind", choices=CONSTRUCT_KINDS, required=True)
    p.add_argument("--t", type=float, default=0.0, metavar="VALUE", help="evaluation time")
    p.add_argument("--out", metavar="PATH", help="output directory (default $OUTPUT_DIR or ./output)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", parents=[common], help="run the configured scenario")
    p.add_argument("--out", metavar="PATH", help="output directory (default $OUTPUT_DIR or ./output)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SimulationAbort as exc:
        print(f"error: simulation aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except RootBracketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (StationaryDivergence, ShootingError) as exc:
        # no stationary layer exists for these data: a property of the input
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
