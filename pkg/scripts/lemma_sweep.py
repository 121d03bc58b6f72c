#!/usr/bin/env python3
"""Residuals of the strip identity across corpus families and random seeds."""

from __future__ import annotations

import argparse
from collections import defaultdict

import numpy as np

from convexity.strip_jensen import deterministic_corpus, edge_distance, random_corpus, verify_lemma


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=[7, 11, 2024])
    ap.add_argument("--count", type=int, default=100)
    args = ap.parse_args()

    by_order = defaultdict(list)
    for f in deterministic_corpus():
        by_order[f.order].append(verify_lemma(f).residual)
    print("fixed families")
    for order in sorted(by_order):
        res = by_order[order]
        print(f"  M={order}: n={len(res):3d}  max residual {max(res):.2e}")

    print("random functions")
    for seed in args.seeds:
        fs = random_corpus(seed, args.count)
        res = np.array([verify_lemma(f).residual for f in fs])
        d = min(edge_distance(f) for f in fs)
        print(f"  seed {seed}: max {res.max():.2e}  median {np.median(res):.2e}  closest edge {d:.3f}")


if __name__ == "__main__":
    main()
