#!/usr/bin/env python3
"""Emit the exponential-law failure trace for a q-Gevrey sequence as CSV.

The per-n lower bound grows like q^(2 n^2) / (rho1 n)^n, so a handful of
rows is enough to pass any threshold.

Usage: python3 scripts/divergence_trace.py [--q 2] [--rho1 10] [--nmax 20]
"""

import argparse
import sys

from carleman import (
    counterexample_divergence,
    extremal_jet2,
    find_counterexample_witness,
    make_sequence,
)


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--q", type=float, default=2.0)
    parser.add_argument("--rho1", type=float, default=10.0)
    parser.add_argument("--nmax", type=int, default=20)
    parser.add_argument("--horizon", type=int, default=256)
    args = parser.parse_args()

    M = make_sequence("qgevrey", args.horizon, q=args.q)
    witness = find_counterexample_witness(M, args.nmax)
    payload = extremal_jet2(M, max(j + k for j, k in zip(witness.j_seq, witness.k_seq)))
    trace = counterexample_divergence(M, witness, args.rho1, payload)

    writer = sys.stdout
    writer.write("n,j_n,k_n,log_lower,log_running,log_simplified\n")
    for i, n in enumerate(trace.n_values):
        writer.write(
            f"{n},{witness.j_seq[i]},{witness.k_seq[i]},"
            f"{trace.log_lower[i]:.6f},{trace.log_lower_running[i]:.6f},"
            f"{trace.log_simplified[i]:.6f}\n"
        )


if __name__ == "__main__":
    main()
