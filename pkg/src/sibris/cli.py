"""Command-line entry point.

  sibris run   --config exp.ini [--seed N] [--out results.csv] [--jobs J]
  sibris sweep --config exp.ini --var K --values 8,16 [...]
  sibris trace --config exp.ini [--out trace.csv]

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import parse_config
from .exceptions import ParseError, ValidationError
from .experiment import run_experiment, run_trace


def _common(sub):
    sub.add_argument("--config", required=True, help="path to the key = value config file")
    sub.add_argument("--seed", type=int, default=None, help="override master_seed")
    sub.add_argument("--out", default=None, help="override output_path")


def build_parser():
    ap = argparse.ArgumentParser(prog="sibris")
    subs = ap.add_subparsers(dest="command", required=True)

    run_p = subs.add_parser("run", help="run the configured experiment grid")
    _common(run_p)
    run_p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    sweep_p = subs.add_parser("sweep", help="run with a sweep given on the command line")
    _common(sweep_p)
    sweep_p.add_argument("--var", required=True, help="sweep variable (K, P_dbm, N, M, r_th)")
    sweep_p.add_argument("--values", required=True, help="comma-separated sweep values")
    sweep_p.add_argument("--jobs", type=int, default=1)

    trace_p = subs.add_parser("trace", help="emit per-iteration objective rows")
    _common(trace_p)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = parse_config(args.config)
        if args.command == "sweep":
            values = [float(x) for x in args.values.split(",")]
            config = replace(config, sweep_var=args.var, sweep_values=values)
            if config.sweep_var not in ("K", "P_dbm", "N", "M", "r_th"):
                raise ValidationError(f"sweep --var must name a sweep variable, got {args.var!r}")
        if args.seed is not None and not 0 <= args.seed < 2 ** 64:
            raise ValidationError("--seed must fit in 64 bits")
    except (ParseError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "trace":
            rows, path = run_trace(config, out_path=args.out, master_seed=args.seed)
        else:
            rows, path = run_experiment(config, jobs=getattr(args, "jobs", 1),
                                        out_path=args.out, master_seed=args.seed)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(rows)} rows to {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
