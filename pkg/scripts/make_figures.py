#!/usr/bin/env python3
"""Render the full self-similar profile gallery as SVG + CSV.

Equivalent to `legendreflow self-similar --catalog`, kept as a script so the
output directory and the sample density are easy to tweak in one place.
"""

import argparse
from pathlib import Path

from legendreflow.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="figures")
    parser.add_argument("--samples", type=int, default=1024)
    args = parser.parse_args()
    Path(args.outdir).mkdir(parents=True, exist_ok=True)
    code = cli_main(["self-similar", "--catalog",
                     "--samples", str(args.samples),
                     "--outdir", args.outdir])
    raise SystemExit(code)


if __name__ == "__main__":
    main()
