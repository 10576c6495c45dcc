#!/usr/bin/env python
"""Run both query-scaling sweeps (N at fixed K, K at fixed N) and write the
per-cell medians plus fitted slopes to CSV files."""

from __future__ import annotations

import argparse

from qvstrain.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20246)
    parser.add_argument("--trials", type=int, default=201)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--prefix", default="sweep")
    args = parser.parse_args()
    for tag, n_grid, k_grid in (
        ("n", "8,16,32,64", "8"),
        ("k", "16", "4,8,16,32"),
    ):
        path = f"{args.prefix}_{tag}.csv"
        with open(path, "w") as fh:
            rc = cli_main(
                ["sweep", "--n-grid", n_grid, "--k-grid", k_grid,
                 "--trials", str(args.trials), "--seed", str(args.seed),
                 "--workers", str(args.workers)],
                out=fh,
            )
        print(f"wrote {path} (exit {rc})")
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
