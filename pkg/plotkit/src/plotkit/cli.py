"""Command line front end: ``plot <kind> --in ... --out ...``.

Exit codes: 0 success, 2 bad arguments or inputs that violate the
published file contract.
"""

from __future__ import annotations

import argparse
import sys

from .readers import ContractError
from .render import FIGURE_KINDS, FigureSpec, render


def _parser():
    p = argparse.ArgumentParser(
        prog="plot",
        description="Render figures from simulation CLI output files.",
    )
    p.add_argument("kind", choices=FIGURE_KINDS)
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="FILE", help="input CSV (repeatable)")
    p.add_argument("--label", dest="labels", action="append", default=[],
                   help="series label, one per --in")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--title", help="figure title")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    spec = FigureSpec(kind=args.kind, inputs=args.inputs, out=args.out,
                      labels=args.labels, title=args.title)
    try:
        series = render(spec)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out} ({len(series)} series)")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
