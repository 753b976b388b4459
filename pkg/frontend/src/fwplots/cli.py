import argparse
import sys

import matplotlib.pyplot as plt

from .render import SchemaError, parse_spec_file, render


def main(argv=None):
    parser = argparse.ArgumentParser(prog="fwplots")
    sub = parser.add_subparsers(dest="command", required=True)
    plot = sub.add_parser("plot", help="render the panel pair from a spec file")
    plot.add_argument("--spec", required=True)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        spec = parse_spec_file(args.spec)
        figures, paths = render(spec)
    except (ValueError, OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for fig in figures:
        plt.close(fig)
    for p in paths:
        print(f"wrote {p}")
    return 0


def main_entry():
    raise SystemExit(main())
