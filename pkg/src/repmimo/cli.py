"""Command-line entry point for reproducing the simulation experiments."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .experiments import run_cdf, run_position_sweep, run_single, target_for_position, write_results
from .scenario import load_config, params_from_config


def _add_common(sub):
    sub.add_argument("--config", help="JSON config file (defaults apply otherwise)")
    sub.add_argument("--trials", type=int, default=1000, help="Monte Carlo trials")
    sub.add_argument("--seed", type=int, help="override the RNG seed")
    sub.add_argument("--phase-grid", type=int, dest="phase_grid",
                     help="override the phase grid size S")
    sub.add_argument("--out", help="output CSV path")
    sub.add_argument("--workers", type=int, default=1,
                     help="parallel trial workers (results independent of this)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repmimo",
        description="Two-cell dynamic-TDD massive MIMO repeater experiments",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sweep = subs.add_parser("sweep", help="median SE versus repeater position")
    _add_common(sweep)

    cdf = subs.add_parser("cdf", help="SE CDFs under complex/real/no repeater gain")
    _add_common(cdf)
    cdf.add_argument("--d-r", type=float, required=True, help="repeater position (m)")
    cdf.add_argument("--direction", choices=("dl", "ul"), required=True)

    single = subs.add_parser("single", help="one realization, JSON record to stdout")
    _add_common(single)
    single.add_argument("--d-r", type=float, required=True, help="repeater position (m)")
    single.add_argument("--direction", choices=("dl", "ul"),
                        help="optimization target (default: cell of the repeater)")
    single.add_argument("--trial", type=int, default=0, help="trial index")
    return parser


def _params(args):
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.phase_grid is not None:
        overrides["phase_grid_s"] = args.phase_grid
    return params_from_config(load_config(args.config, overrides))


def run(argv=None) -> None:
    args = build_parser().parse_args(argv)
    params = _params(args)

    if args.command == "sweep":
        result = run_position_sweep(params, trials=args.trials, workers=args.workers)
        out = args.out or "sweep.csv"
        write_results(result, out, params)
        print(f"wrote {len(result.repeater_positions)} positions x {args.trials} trials to {out}")
    elif args.command == "cdf":
        result = run_cdf(params, args.d_r, args.direction, args.trials, workers=args.workers)
        out = args.out or f"cdf_{args.direction}.csv"
        write_results(result, out, params)
        print(f"wrote {args.trials} paired samples at d_r={args.d_r} m to {out}")
    elif args.command == "single":
        direction = args.direction or target_for_position(args.d_r)[0]
        record = run_single(params, args.d_r, (direction, 0), trial=args.trial)
        payload = json.dumps(dataclasses.asdict(record), indent=1)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(payload + "\n")
        else:
            print(payload)


def main(argv=None) -> int:
    try:
        run(argv)
    except Exception as exc:   # CLI boundary: report and signal failure
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
