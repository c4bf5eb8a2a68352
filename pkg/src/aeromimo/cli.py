"""Command-line interface.

Subcommands
-----------
validate CONFIG      check every scenario/sweep invariant; exit 0 iff valid
run CONFIG           execute the sweep, write one CSV per environment plus a
                     run manifest; flags: --out, --seed, --trials, --parallel
selftest             run the fast oracle suite and print each margin

Exit codes: 0 success; 1 validation/oracle failure; 2 configuration error;
3 solver error; 4 I/O error. CSV bytes depend only on (config, seed); wall
time and timestamps go to the manifest only. AEROMIMO_OUT sets the default
output directory.
"""

import argparse
import json
import os
import platform
import sys
import time
from datetime import datetime, timezone

from .config import canonical_yaml, config_hash, load_config
from .errors import ConfigurationError, SolverError

__all__ = ["main"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


def cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigurationError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    violations = cfg.violations()
    if violations:
        print(f"{args.config}: {len(violations)} violation(s)")
        for v in violations:
            print(f"  - {v}")
        return EXIT_INVALID
    print(f"{args.config}: valid (hash {config_hash(cfg)})")
    return EXIT_OK


def cmd_run(args) -> int:
    from .experiments import emit_csv, run_sweep

    try:
        cfg = load_config(args.config)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    violations = cfg.violations()
    if violations:
        print("invalid configuration:", file=sys.stderr)
        for v in violations:
            print(f"  - {v}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = args.out or os.environ.get("AEROMIMO_OUT") or cfg.output.directory
    started = datetime.now(timezone.utc).isoformat()
    t0 = time.monotonic()
    try:
        outcome = run_sweep(cfg, seed=args.seed, trials=args.trials, parallel=args.parallel)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    try:
        os.makedirs(out_dir, exist_ok=True)
        written = []
        for env_name, rows in outcome.rows_by_env.items():
            path = os.path.join(out_dir, f"{cfg.output.prefix}_{env_name}.csv")
            emit_csv(rows, path)
            written.append(path)
            print(f"wrote {path} ({len(rows)} rows)")
        manifest = {
            "config_path": os.path.abspath(args.config),
            "config_hash": config_hash(cfg),
            "config_canonical": canonical_yaml(cfg),
            "seed": args.seed if args.seed is not None else cfg.scenario.seed,
            "trials": args.trials if args.trials is not None else cfg.sweep.trials,
            "parallel": args.parallel,
            "started_at": started,
            "wall_time_s": time.monotonic() - t0,
            "csv_files": [os.path.basename(p) for p in written],
            "skipped": [
                {"environment": env, "axis": value, "reason": reason}
                for env, value, reason in outcome.skipped
            ],
            "solver_diagnostics": outcome.diagnostics,
            "versions": _versions(),
        }
        mpath = os.path.join(out_dir, f"{cfg.output.prefix}_manifest.json")
        with open(mpath, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
        print(f"wrote {mpath}")
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for env, value, reason in outcome.skipped:
        print(f"note: skipped {env} @ {value}: {reason}")
    return EXIT_OK


def _versions() -> dict:
    import numpy
    import scipy

    from . import __version__

    return {
        "aeromimo": __version__,
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(perturb_mp=args.perturb_mp)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: {r.margin}")
        failed += 0 if r.passed else 1
    if failed:
        print(f"{failed} oracle(s) failed", file=sys.stderr)
        return EXIT_INVALID
    print("all oracles passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aeromimo",
        description="Uplink simulator for aerial cell-free massive MIMO",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config")
    p_val.set_defaults(func=cmd_validate)

    p_run = sub.add_parser("run", help="run the configured sweep")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory (default: AEROMIMO_OUT or config)")
    p_run.add_argument("--seed", type=int, default=None, help="override the master seed")
    p_run.add_argument("--trials", type=int, default=None, help="override the trial count")
    p_run.add_argument("--parallel", type=int, default=1, help="worker processes")
    p_run.set_defaults(func=cmd_run)

    p_st = sub.add_parser("selftest", help="run the fast oracle suite")
    p_st.add_argument("--perturb-mp", type=float, default=None,
                      help="test hook: relative perturbation of the MP oracle constant")
    p_st.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
