#!/usr/bin/env python3
"""Generate the four standard comparison tables (error probability and gain
over SQL, ideal and non-ideal devices) into an output directory.

Equivalent to `pidr fig2`; kept as a script so the default experiment is one
command from a fresh checkout:

    python scripts/run_fig2.py --out results/
"""

import argparse
import sys

from pidr.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--points", type=int, default=60)
    args = ap.parse_args()
    return cli_main([
        "fig2",
        "--out", args.out,
        "--seed", str(args.seed),
        "--points", str(args.points),
    ])


if __name__ == "__main__":
    sys.exit(main())
