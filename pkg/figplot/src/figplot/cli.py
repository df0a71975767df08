"""Command line front end.

    figplot render --manifest PATH --out DIR

reads a ``manifest.json`` written by the solver CLI's ``scenario``
subcommand together with every CSV it references, and writes one PNG named
after the preset into DIR. A missing or malformed input aborts with a
message naming the offending path; nothing is recomputed, re-fit, or
interpolated on the way to the page.

Exit codes: 0 success, 1 bad arguments or missing/malformed input.
"""

from __future__ import annotations

import argparse
import sys

from .io import InputError, load_figure
from .render import render_figure


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figplot",
        description="render scenario manifests to boundary/error panel images",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one manifest to one image")
    p.add_argument("--manifest", required=True, metavar="PATH",
                   help="manifest.json from a scenario run")
    p.add_argument("--out", required=True, metavar="DIR",
                   help="directory for the rendered image")
    args = parser.parse_args(argv)

    try:
        spec = load_figure(args.manifest, args.out)
        out_path = render_figure(spec)
    except InputError as exc:
        print(f"figplot: {exc}", file=sys.stderr)
        return 1
    print(out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
