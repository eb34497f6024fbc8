#!/usr/bin/env python3
"""Tabulate the even-count bounds against the exact values where known.

For each ground-set size the script prints the container parameters
(alpha = lambda/(d+lambda), sigma, the rounded grid value sigma'), the Bell
sanity bound on local-cover counts, and the resulting upper bound on
log2 e_n, next to the exact log2 e_n for n <= 5 and the lower bound
n - 1 - log2 n that the doubled-count recurrence guarantees for
log2 log2 e_n.

Usage:
    python3 scripts/bound_table.py [--max-n 10] [--cache-dir DIR]
"""

from __future__ import annotations

import argparse
import math
import sys

from deltamatroid import build_levels, count_even, even_lower_bound, upper_bound_report


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=10)
    parser.add_argument("--cache-dir", default=None)
    args = parser.parse_args()

    store = build_levels(min(args.max_n, 5), cache_dir=args.cache_dir)
    exact = {n: count_even(store[n]) for n in store if n >= 1}

    print(
        f"{'n':>2}  {'alpha':>6}  {'sigma':>9}  {'sigma_prime':>12}"
        f"  {'bell':>12}  {'log2 e_n <=':>12}  {'exact log2':>10}  {'lglg lower':>10}"
    )
    for n in range(3, args.max_n + 1):
        r = upper_bound_report(n)
        e = exact.get(n)
        exact_log = f"{math.log2(e):.4f}" if e else "-"
        lower = even_lower_bound(n)
        print(
            f"{n:>2}  {str(r.alpha):>6}  {r.sigma:>9.6f}  {str(r.sigma_prime):>12}"
            f"  {r.bell_bound:>12}  {r.log_e_n_bound:>12.3f}  {exact_log:>10}"
            f"  {lower:>10.4f}"
        )
        if e is not None:
            assert math.log2(e) <= r.log_e_n_bound + 1e-9
            assert math.log2(math.log2(e)) >= lower
    print("bounds dominate every exact value shown")
    return 0


if __name__ == "__main__":
    sys.exit(main())
