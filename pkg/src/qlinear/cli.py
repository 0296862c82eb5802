"""Command line: ``qlinear {run,maximal,sweep,verify,bounds,curves} [flags]``.

Settings can also come from ``--config FILE``, a flat ``key = value`` file
in which list keys (``n``, ``q``) may repeat.  Flags override the file.
"""
from __future__ import annotations

import argparse
import sys

from .experiment import MODES, ExperimentSpec, run_experiment

LIST_KEYS = {"n", "q"}
INT_KEYS = {"seed", "runs", "stride", "samples", "jobs", "enum_budget",
            "rejection_cap", "tracked_per_size"}


def read_config(path: str) -> dict:
    conf: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key in LIST_KEYS:
                conf.setdefault(key, []).extend(int(v) for v in value.replace(",", " ").split())
            elif key in INT_KEYS:
                conf[key] = int(value)
            elif key == "track":
                conf[key] = value.lower() in ("1", "true", "yes", "on")
            elif key in ("stop", "out"):
                conf[key] = value
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return conf


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qlinear", description="Random greedy q-linear process experiments")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--q", type=int, nargs="+")
    p.add_argument("--seed", type=int, help="base seed; run k uses seed + k")
    p.add_argument("--runs", type=int, help="seeds per (n, q)")
    p.add_argument("--stop", help="m0 | steps:K | maximal")
    p.add_argument("--stride", type=int, help="steps between trace rows")
    p.add_argument("--samples", type=int, help="Monte Carlo samples for over-budget counts")
    p.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--enum-budget", dest="enum_budget", type=int)
    p.add_argument("--rejection-cap", dest="rejection_cap", type=int)
    p.add_argument("--no-track", dest="track", action="store_false", default=None,
                   help="skip codegree tracking")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        conf = read_config(args.config) if args.config else {}
        for key, value in vars(args).items():
            if key in ("mode", "config") or value is None:
                continue
            conf[key] = value
        conf.setdefault("n", [])
        conf.setdefault("q", [])
        spec = ExperimentSpec(mode=args.mode, **conf)
    except (OSError, ValueError, TypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"qlinear: error: {exc}", file=sys.stderr)
        return 2
    try:
        return run_experiment(spec)
    except ValueError as exc:
        print(f"qlinear: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
