#!/usr/bin/env python3
"""Build a curve-lemma schedule and print it with its chain verdict.

Usage: python3 scripts/schedule_report.py [--delta 1] [--theta 0.5] [--count 16]
"""

import argparse

from carleman import build_schedule, companion_sequence, make_sequence, verify_chain


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--delta", type=float, default=1.0)
    parser.add_argument("--theta", type=float, default=0.5)
    parser.add_argument("--count", type=int, default=16)
    parser.add_argument("--horizon", type=int, default=256)
    args = parser.parse_args()

    M = make_sequence("gevrey", args.horizon, delta=args.delta)
    Mbar = companion_sequence(M, args.theta)
    sched = build_schedule(M, Mbar, args.count)
    print(f"sequence {M.label()}, companion {Mbar.label()}, "
          f"chain constant C = {sched.chain_C:g}")
    print(f"{'j':>3}{'T_j':>12}{'t_j':>12}{'s_j':>12}{'ln lambda_j':>16}")
    for j in range(sched.J):
        print(f"{j:>3}{sched.T[j]:>12.6g}{sched.t[j]:>12.6g}"
              f"{sched.s[j]:>12.6g}{sched.lambda_log[j]:>16.4f}")
    report = verify_chain(sched, M)
    print(f"chain holds: {report.holds}; constants consistent: "
          f"{report.constant_consistent}; max slack {report.max_slack:.3e}")


if __name__ == "__main__":
    main()
