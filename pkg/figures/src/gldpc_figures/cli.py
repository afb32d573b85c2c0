"""render_figures: regenerate figures from gldpc CSV outputs."""

from __future__ import annotations

import argparse
import sys

from .recipes import FIGURE_IDS, SchemaError, recipe_for
from .render import render


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="render_figures",
        description="Plot gldpc experiment CSVs as figure images",
    )
    ap.add_argument("--recipe", required=True,
                    help=f"figure id ({', '.join(FIGURE_IDS)}) or 'all'")
    ap.add_argument("--in", dest="input_dir", required=True, help="directory with input CSVs")
    ap.add_argument("--out", dest="output_dir", required=True, help="directory for images")
    args = ap.parse_args(argv)
    render_all = args.recipe == "all"
    ids = FIGURE_IDS if render_all else [args.recipe]
    rendered = 0
    for fid in ids:
        try:
            path = render(recipe_for(fid, args.input_dir), args.output_dir)
        except (SchemaError, FileNotFoundError, ValueError) as exc:
            if render_all and isinstance(exc, (FileNotFoundError, ValueError)):
                print(f"skipping {fid}: inputs not found", file=sys.stderr)
                continue
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(path)
        rendered += 1
    if rendered == 0:
        print("error: nothing rendered", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
