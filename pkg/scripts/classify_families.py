#!/usr/bin/env python3
"""Print the verdict table for every built-in weight-sequence family.

Usage: python3 scripts/classify_families.py [--horizon K]
"""

import argparse

from carleman import classify, make_sequence

CASES = [
    ("gevrey", {"delta": 0.5}),
    ("gevrey", {"delta": 1.0}),
    ("gevrey", {"delta": 2.0}),
    ("qgevrey", {"q": 2.0}),
    ("qgevrey", {"q": 3.0}),
    ("logtype", {"delta": 0.5}),
    ("logtype", {"delta": 1.0}),
    ("logtype", {"delta": 2.0}),
    ("constant", {}),
]

COLUMNS = [
    ("log_convex", "log-cvx"),
    ("derivation_closed", "deriv"),
    ("moderate_growth", "moderate"),
    ("quasianalytic", "quasi"),
    ("strongly_nonqa", "strong-nqa"),
    ("equals_comega", "= analytic"),
]


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--horizon", type=int, default=128)
    args = parser.parse_args()

    header = f"{'sequence':<14}" + "".join(f"{label:>12}" for _, label in COLUMNS)
    print(header)
    print("-" * len(header))
    for family, kwargs in CASES:
        M = make_sequence(family, args.horizon, **kwargs)
        report = classify(M)
        verdicts = report.verdicts()
        row = f"{M.label():<14}" + "".join(
            f"{verdicts[key]:>12}" for key, _ in COLUMNS
        )
        print(row)


if __name__ == "__main__":
    main()
