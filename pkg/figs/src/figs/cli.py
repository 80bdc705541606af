"""figs render <figure-id> --in <csv> --out <png>"""

from __future__ import annotations

import argparse
import sys

from .recipes import RECIPES, RecipeError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figs", description="Render figures from qthermo CSV artifacts.")
    sub = parser.add_subparsers(dest="command", required=True)
    ren = sub.add_parser("render", help="render one figure")
    ren.add_argument("figure_id", choices=sorted(RECIPES),
                     help="which figure to produce")
    ren.add_argument("--in", dest="csv_path", required=True,
                     help="input CSV artifact")
    ren.add_argument("--out", dest="out_path", required=True,
                     help="output PNG path (sidecar JSON written beside it)")
    lst = sub.add_parser("list", help="list figure ids")

    args = parser.parse_args(argv)
    if args.command == "list":
        for name in sorted(RECIPES):
            print(name)
        return 0
    try:
        render(args.figure_id, args.csv_path, args.out_path)
        print(f"wrote {args.out_path} and {args.out_path}.json")
        return 0
    except RecipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
