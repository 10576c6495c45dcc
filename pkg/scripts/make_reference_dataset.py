#!/usr/bin/env python
"""Generate the reference 12-point planted dataset (margin 0.195, M = 2)
used in examples and docs, and print its planted separator."""

from __future__ import annotations

import argparse

from qvstrain.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-file", default="reference_dataset.txt")
    parser.add_argument("--seed", type=int, default=20)
    args = parser.parse_args()
    return cli_main([
        "gen-dataset", "--n", "12", "--m", "2", "--gamma", "0.195",
        "--seed", str(args.seed), "--out-file", args.out_file,
    ])


if __name__ == "__main__":
    raise SystemExit(main())
