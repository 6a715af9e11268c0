"""Command line: render figures from solver CSV outputs.

    relaxplot profiles   --in PROFILE.csv [MORE.csv ...] --out FIG_BASE
    relaxplot timeseries --in SERIES.csv [MORE.csv ...]  --out FIG_BASE

FIG_BASE gets one file per requested format (PNG and SVG by default).
Exit codes: 0 success, 2 bad inputs (missing file, schema mismatch).
"""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, render_profiles, render_timeseries
from .reader import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaxplot",
        description="Render figures from relaxeuler CSV outputs.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind, default_panels in (("profiles", "rho,q"), ("timeseries", "max_q,l1_rho_err")):
        p = sub.add_parser(kind)
        p.add_argument("--in", dest="inputs", nargs="+", required=True,
                       metavar="CSV", help="input files (overlaid as series)")
        p.add_argument("--out", required=True, metavar="FIG_BASE",
                       help="output path without extension")
        p.add_argument("--panels", default=default_panels,
                       help="comma-separated variables, one panel each")
        p.add_argument("--labels", default=None,
                       help="comma-separated legend labels (default: file metadata)")
        p.add_argument("--formats", default="png,svg",
                       help="comma-separated image formats")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            inputs=args.inputs,
            out_base=args.out,
            panels=tuple(s.strip() for s in args.panels.split(",") if s.strip()),
            labels=(None if args.labels is None
                    else [s.strip() for s in args.labels.split(",")]),
            formats=tuple(s.strip() for s in args.formats.split(",") if s.strip()),
        )
        render = render_profiles if args.kind == "profiles" else render_timeseries
        for path in render(spec):
            print(f"wrote {path}")
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
