"""Command line: report --in sweep.csv --out-dir figs/ [--svg]."""

from __future__ import annotations

import argparse
import sys

from .render import PlotJob, RenderError, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="report",
        description="Render convergence figures and a markdown summary "
                    "from a sweep CSV.")
    ap.add_argument("--in", dest="input_csv", required=True)
    ap.add_argument("--out-dir", dest="output_dir", required=True)
    ap.add_argument("--svg", action="store_true", help="emit SVG instead of PNG")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = PlotJob(input_csv=args.input_csv, output_dir=args.output_dir, svg=args.svg)
    try:
        images, md = render(job)
    except (RenderError, OSError) as exc:
        print(f"report: error: {exc}", file=sys.stderr)
        return 1
    for path in images:
        print(path)
    print(md)
    return 0


if __name__ == "__main__":
    sys.exit(main())
