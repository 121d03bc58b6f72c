#!/usr/bin/env python3
"""Scan |L(1/2, chi)| against sqrt(C) exp(4S) and list the tightest characters."""

from __future__ import annotations

import argparse
import time

from convexity import bounds
from convexity.dirichlet import zeta_function


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmax", type=int, default=1000)
    ap.add_argument("--top", type=int, default=10, help="how many of the largest ratios to show")
    args = ap.parse_args()

    start = time.perf_counter()
    rows = [r for q in range(1, args.qmax + 1) for r in bounds.scan_modulus(q)]
    rows.sort(key=lambda r: r.ratio, reverse=True)
    elapsed = time.perf_counter() - start

    z = bounds.bound_report(zeta_function())
    print(f"zeta: |F(1/2)| = {z.L_abs:.7f}, bound = {z.theorem_bound:.4f}, ratio = {z.ratio:.4f}")
    print(f"{len(rows)} primitive characters with q <= {args.qmax} in {elapsed:.1f}s")
    print(f"{'q':>5} {'index':>6} {'parity':>6} {'C':>9} {'|L(1/2)|':>10} {'bound':>9} {'ratio':>7}")
    for r in rows[: args.top]:
        print(f"{r.q:5d} {r.index:6d} {r.parity:6d} {r.C:9.4f} {r.L_abs:10.5f} {r.theorem_bound:9.4f} {r.ratio:7.4f}")


if __name__ == "__main__":
    main()
