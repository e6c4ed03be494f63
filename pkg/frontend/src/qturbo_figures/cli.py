"""Command line entry point: qturbo-figures --kind ... --in ... --out ..."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .csvio import InputError
from .render import KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qturbo-figures",
        description=(
            "Render figures from the simulator's CSV/JSON outputs. "
            "All plotted values come verbatim from the input files."
        ),
    )
    parser.add_argument("--kind", required=True, choices=KINDS, help="figure type")
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="FILE",
        help="input file (repeatable); CSV sweeps/curves or switch-table JSON",
    )
    parser.add_argument("--out", required=True, metavar="FILE", help="output image path")
    parser.add_argument(
        "--normalized",
        action="store_true",
        help="plot per-qubit (0..1) information columns instead of raw bits",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        kind=args.kind,
        inputs=tuple(Path(p) for p in args.inputs),
        out=Path(args.out),
        normalized=args.normalized,
    )
    try:
        result = render(spec)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    for notice in result.notices:
        print(notice)
    print(f"wrote {spec.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
