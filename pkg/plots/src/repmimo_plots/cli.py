"""`repmimo-plot (sweep|cdf) <in.csv> <out-image>`"""

from __future__ import annotations

import argparse
import sys

from .render import plot_cdf, plot_sweep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repmimo-plot",
        description="Render simulation result CSVs to figures",
    )
    subs = parser.add_subparsers(dest="kind", required=True)
    for kind, doc in (("sweep", "median SE vs repeater position"),
                      ("cdf", "per-mode SE CDFs")):
        sub = subs.add_parser(kind, help=doc)
        sub.add_argument("input_csv", help="result CSV from the simulator")
        sub.add_argument("output_image", help="figure path (.png/.pdf/.svg)")
        sub.add_argument("--title", default="", help="optional figure title")
    return parser


def run(argv=None) -> None:
    args = build_parser().parse_args(argv)
    fn = plot_sweep if args.kind == "sweep" else plot_cdf
    out = fn(args.input_csv, args.output_image, title=args.title)
    print(f"wrote {out}")


def main(argv=None) -> int:
    try:
        run(argv)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
