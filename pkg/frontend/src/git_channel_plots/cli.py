"""Command-line batch renderer: ``render_figures <csv-dir> <out-dir>``."""

from __future__ import annotations

import argparse
import sys

from .render import SchemaError, render_all


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render spectrum and design-space figures from CSV data")
    parser.add_argument("csv_dir", help="directory holding the CSV outputs")
    parser.add_argument("out_dir", help="directory for the rendered images")
    parser.add_argument("--format", choices=("svg", "png"), default="png")
    args = parser.parse_args(argv)
    try:
        written = render_all(args.csv_dir, args.out_dir, args.format)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
