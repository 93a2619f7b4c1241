#!/usr/bin/env python3
"""Sweep the cyclic minimum over a geometric n-grid and extract the constant.

Writes the sweep as CSV and prints the fitted intercept of
deficit = a - c / log(n), whose limit is A = 1.70465603718...

Usage:
    python scripts/run_sweep.py [--from 1e3] [--to 1e6] [--points 20]
                                [--out sweep.csv]
"""

import argparse
import sys
import time

from cycmax.asymptotics import (
    A_REFERENCE,
    estimate_constant_a,
    geometric_grid,
    records_to_csv,
    sweep,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--from", dest="start", type=float, default=1e3)
    parser.add_argument("--to", dest="stop", type=float, default=1e6)
    parser.add_argument("--points", type=int, default=20)
    parser.add_argument("--out", default="sweep.csv")
    args = parser.parse_args()

    grid = geometric_grid(args.start, args.stop, args.points)
    print(f"solving {len(grid)} instances, n = {grid[0]} .. {grid[-1]}")
    t0 = time.time()
    records = sweep(grid)
    elapsed = time.time() - t0

    a_hat, diag = estimate_constant_a(records)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(records_to_csv(records, a_hat))

    for r in records:
        flag = "" if r.converged else "  [not converged]"
        print(
            f"  n={r.n:>8}  value={r.s_star:14.9f}  deficit={r.deficit:.9f}  "
            f"support={r.support:>2}{flag}"
        )
    print(f"\nwrote {args.out} in {elapsed:.1f}s")
    print(f"fitted intercept a_hat = {a_hat:.9f}  (reference {A_REFERENCE})")
    print(f"slope = {diag.slope:.4f}, fit residual = {diag.residual_norm:.2e}")
    print(
        "note: deficits wobble log-periodically (amplitude ~1e-2) because the\n"
        "optimal support size is an integer; the intercept averages this out"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
