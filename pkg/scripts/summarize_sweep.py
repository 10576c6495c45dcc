#!/usr/bin/env python
"""Summarize one or more sweep CSV files: per-cell quantum/classical query
ratios and the fitted log-log slopes."""

from __future__ import annotations

import argparse
import csv


def summarize(path: str) -> None:
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    print(f"== {path} ==")
    for row in rows:
        if row["kind"] == "cell":
            q = float(row["median_quantum_bit_queries"])
            c = float(row["median_classical_queries"])
            print(
                f"  N={row['N']:>3} K={row['K']:>3}  quantum={q:>10.0f}  "
                f"classical={c:>7.0f}  ratio={q / c:>8.1f}  "
                f"found_rate={row['found_rate']}"
            )
    for row in rows:
        if row["kind"] == "fit":
            print(f"  slope vs {row['slope_axis']}: {float(row['slope']):.3f}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_files", nargs="+")
    args = parser.parse_args()
    for path in args.csv_files:
        summarize(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
