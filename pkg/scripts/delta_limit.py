#!/usr/bin/env python3
"""Where the saved C^eps matters: delta -> 0 limit, crossover conductors, zero mass."""

from __future__ import annotations

import argparse

from convexity import bounds
from convexity.dirichlet import dirichlet_l_function, primitive_characters, zeta_function, zeta_zeros


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.05, 0.1, 0.25])
    ap.add_argument("--A", type=float, default=1.0)
    args = ap.parse_args()

    zeta = zeta_function()
    b = zeta.log_coeffs(bounds.DEFAULT_CUTOFF)
    S = bounds.euler_abs_sum(b).upper
    print(f"S = sum |b_n| n^(-3/2) <= {S:.6f}")

    print("smoothed Euler sum along delta -> 0 (delta = 0 row is extrapolated)")
    for d, v in bounds.delta_table(b):
        print(f"  delta={d:<6g} {v:.6f}")
    print(f"  exact delta=0 value {bounds.smoothed_limit(b):.6f}, against 2S = {2 * S:.6f}")

    print("conductor beyond which eps^-1 A C^(1/2+eps) exceeds C^(1/2) exp(4S)")
    for eps in args.eps:
        print(f"  eps={eps:<5g} C* = {bounds.classic_crossover(eps, args.A, S):.4g}")

    print("intermediate slack against the J mass of zeros in the strip (zeta)")
    gammas = zeta_zeros(60)
    zeros = [0.5 + 1j * g for g in gammas] + [0.5 - 1j * g for g in gammas]
    for d in bounds.DELTAS:
        chk = bounds.intermediate_check(zeta, d)
        print(f"  delta={d:<5g} slack={chk.slack:+.4f}  J mass={bounds.zero_J_mass(zeros, d):.3e}")

    chi = primitive_characters(7)[1]
    rep = bounds.bound_report(dirichlet_l_function(chi))
    print(f"{rep.name}: ratio {rep.ratio:.4f}, classic value {rep.classic_value:.3f} vs bound {rep.theorem_bound:.3f}")


if __name__ == "__main__":
    main()
