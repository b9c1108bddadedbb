"""Command-line surface.

Subcommands: classify, minorants, include, compose, ddnorm, curve-lemma,
counterexample.  Reports go to stdout (or --out FILE) as json, md or csv;
output is byte-deterministic for a fixed configuration and seed.

Exit codes: 0 success, 1 bad input or violated precondition, 2 inconclusive
under --strict (classify) or threshold not crossed (counterexample).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import constructions, divdiff, jets, weights
from .errors import CarlemanError, PreconditionError
from .reporting import Verdict, jsonable

DEFAULT_HORIZON = 128
DEFAULT_RHO = 1.0
DEFAULT_SEED = 0


@dataclass
class RunConfig:
    command: str
    fmt: str = "json"
    out: str | None = None
    horizon: int = DEFAULT_HORIZON
    rho: float = DEFAULT_RHO
    seed: int = DEFAULT_SEED
    strict: bool = False
    options: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# sequence specs
# ---------------------------------------------------------------------------

def parse_sequence_spec(text: str, horizon: int) -> weights.WeightSequence:
    """Inline form family[:param] (e.g. gevrey:1, qgevrey:2, constant) or a
    JSON spec file path."""
    head = text.split(":", 1)[0]
    if head in weights.FAMILIES:
        parts = text.split(":")
        family = parts[0]
        param = float(parts[1]) if len(parts) > 1 else None
        if family in ("gevrey", "logtype"):
            return weights.make_sequence(family, horizon, delta=param)
        if family == "qgevrey":
            return weights.make_sequence(family, horizon, q=param)
        if family == "constant":
            return weights.make_sequence(family, horizon)
        raise CarlemanError("custom sequences must come from a spec file")
    spec = json.loads(Path(text).read_text())
    return weights.sequence_from_spec(spec)


def _sequence_from_args(args, horizon: int) -> weights.WeightSequence:
    if getattr(args, "file", None):
        spec = json.loads(Path(args.file).read_text())
        return weights.sequence_from_spec(spec)
    family = args.family
    if family in ("gevrey", "logtype"):
        if args.delta is None:
            raise CarlemanError(f"{family} requires --delta")
        return weights.make_sequence(family, horizon, delta=args.delta)
    if family == "qgevrey":
        if args.q is None:
            raise CarlemanError("qgevrey requires --q")
        return weights.make_sequence(family, horizon, q=args.q)
    if family == "constant":
        return weights.make_sequence(family, horizon)
    raise CarlemanError("custom sequences must come from --file")


def _add_sequence_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=weights.FAMILIES, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--file", default=None, help="JSON sequence spec file")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--format", choices=("json", "md", "csv"), default="json")
    p.add_argument("--out", default=None, help="write the report to a file")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


# ---------------------------------------------------------------------------
# renderers
# ---------------------------------------------------------------------------

_PROPERTY_LABELS = {
    "log_convex": "logarithmically convex",
    "derivation_closed": "derivation closed",
    "moderate_growth": "moderate growth",
    "quasianalytic": "quasianalytic",
    "strongly_nonqa": "strongly non-quasianalytic",
    "equals_comega": "equals the real-analytic class",
}


def _emit(text: str, cfg_out: str | None) -> None:
    if cfg_out:
        Path(cfg_out).write_text(text)
    else:
        sys.stdout.write(text)


def _render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _fmt_num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _render_classify_md(payload: dict) -> str:
    rep = payload["report"]
    lines = [
        f"# Classification: {payload['sequence']['family']}"
        + (f" (param {_fmt_num(payload['sequence'].get('delta') or payload['sequence'].get('q'))})"
           if payload['sequence'].get('delta') or payload['sequence'].get('q') else ""),
        "",
        "| property | verdict |",
        "|---|---|",
    ]
    for key, label in _PROPERTY_LABELS.items():
        lines.append(f"| {label} | {rep[key]['verdict']} |")
    return "\n".join(lines) + "\n"


def _render_classify_csv(payload: dict) -> str:
    rep = payload["report"]
    rows = ["property,verdict"]
    for key in _PROPERTY_LABELS:
        rows.append(f"{key},{rep[key]['verdict']}")
    return "\n".join(rows) + "\n"


def _render_table_md(title: str, header: list[str], rows: list[list[str]]) -> str:
    lines = [f"# {title}", "", "| " + " | ".join(header) + " |",
             "|" + "---|" * len(header)]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def _render_table_csv(header: list[str], rows: list[list[str]]) -> str:
    out = [",".join(header)]
    out.extend(",".join(row) for row in rows)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_classify(args) -> int:
    M = _sequence_from_args(args, args.horizon)
    report = weights.classify(M)
    payload = {
        "command": "classify",
        "sequence": M.to_spec(),
        "report": report.to_dict(),
    }
    if args.format == "md":
        _emit(_render_classify_md(payload), args.out)
    elif args.format == "csv":
        _emit(_render_classify_csv(payload), args.out)
    else:
        _emit(_render_json(payload), args.out)
    if args.strict and Verdict.INCONCLUSIVE.value in report.verdicts().values():
        return 2
    return 0


def _cmd_minorants(args) -> int:
    M = _sequence_from_args(args, args.horizon)
    pair = weights.minorants(M)
    payload = {
        "command": "minorants",
        "sequence": M.to_spec(),
        "minorants": pair.to_dict(),
    }
    if args.format == "json":
        _emit(_render_json(payload), args.out)
        return 0
    header = ["k", "log_m", "log_mstar"]
    rows = [
        [str(k), _fmt_num(float(pair.m_log[k])), _fmt_num(float(pair.mstar_log[k]))]
        for k in range(1, M.horizon + 1)
    ]
    if args.format == "md":
        _emit(_render_table_md(f"Minorants: {M.label()}", header, rows), args.out)
    else:
        _emit(_render_table_csv(header, rows), args.out)
    return 0


def _cmd_include(args) -> int:
    left = parse_sequence_spec(args.left, args.horizon)
    right = parse_sequence_spec(args.right, args.horizon)
    verdict = weights.inclusion_estimate(left, right)
    payload = {
        "command": "include",
        "left": left.to_spec(),
        "right": right.to_spec(),
        "inclusion": verdict.to_dict(),
    }
    if args.format == "md":
        text = (
            f"# Inclusion\n\nC^M for {left.label()} inside C^N for {right.label()}: "
            f"**{verdict.verdict.value}**\n"
        )
        _emit(text, args.out)
    elif args.format == "csv":
        _emit(f"left,right,verdict\n{left.label()},{right.label()},{verdict.verdict.value}\n",
              args.out)
    else:
        _emit(_render_json(payload), args.out)
    return 0


def _named_jet(spec: str, order: int) -> jets.Jet:
    if spec == "exp":
        return jets.exp_jet(order)
    if spec == "identity":
        return jets.identity_jet(0, order)
    if spec.startswith("geom:"):
        return jets.geometric_jet(Fraction(spec.split(":", 1)[1]), order)
    if spec.startswith("poly:"):
        coeffs = [Fraction(c) for c in spec.split(":", 1)[1].split(",")]
        return jets.polynomial_jet(coeffs, order=order)
    raise CarlemanError(f"unknown jet spec {spec!r}")


def _cmd_compose(args) -> int:
    inner = _named_jet(args.inner, args.order)
    # Recentre the outer jet at the inner jet's value.
    value = inner.exact[0] if inner.exact is not None else inner.value.value
    if args.outer == "exp":
        outer = jets.exp_jet(args.order, at=float(value))
    elif args.outer == "identity":
        outer = jets.identity_jet(value, args.order)
    elif args.outer.startswith("geom:"):
        r = Fraction(args.outer.split(":", 1)[1])
        if Fraction(value) != 0:
            raise CarlemanError("geom outer jets require an inner value of 0")
        outer = jets.geometric_jet(r, args.order)
    elif args.outer.startswith("poly:"):
        coeffs = [Fraction(c) for c in args.outer.split(":", 1)[1].split(",")]
        outer = jets.polynomial_jet(coeffs, order=args.order, base=value)
    else:
        raise CarlemanError(f"unknown jet spec {args.outer!r}")
    M = _sequence_from_args(args, args.horizon)
    composed = jets.jet_compose(outer, inner)
    fit_outer = jets.fit_growth(outer, M)
    fit_inner = jets.fit_growth(inner, M)
    bound = jets.composition_stability_bound(fit_outer, fit_inner, M)
    logs = composed.coefficient_logs()
    dominated = bool(
        np.all(
            (logs <= bound.log_bound[: composed.K + 1] + 1e-9)
            | ~np.isfinite(logs)
        )
    )
    payload = {
        "command": "compose",
        "outer": args.outer,
        "inner": args.inner,
        "sequence": M.to_spec(),
        "composed": composed.to_dict(),
        "fit": jets.fit_growth(composed, M).to_dict(),
        "bound": bound.to_dict(),
        "dominated": dominated,
    }
    if args.format == "md":
        rows = [
            [str(k), _fmt_num(composed.coeffs[k].value), _fmt_num(float(bound.log_bound[k]))]
            for k in range(composed.K + 1)
        ]
        _emit(_render_table_md(
            f"Composition {args.outer} after {args.inner}",
            ["k", "coefficient", "log bound"], rows), args.out)
    elif args.format == "csv":
        rows = [
            [str(k), _fmt_num(composed.coeffs[k].value), _fmt_num(float(bound.log_bound[k]))]
            for k in range(composed.K + 1)
        ]
        _emit(_render_table_csv(["k", "coefficient", "log_bound"], rows), args.out)
    else:
        _emit(_render_json(payload), args.out)
    return 0


_SAMPLERS = {
    "runge": lambda x: 1.0 / (2.0 - x),
    "exp2x": lambda x: math.exp(2.0 * x),
    "sin": math.sin,
}


def _cmd_ddnorm(args) -> int:
    M = _sequence_from_args(args, args.horizon)
    if args.plan:
        plan = divdiff.SamplingPlan.from_dict(json.loads(Path(args.plan).read_text()))
    else:
        plan = divdiff.SamplingPlan(
            max_order=args.max_order,
            chebyshev_points=args.chebyshev_points,
            random_tuples=args.random_tuples,
            seed=args.seed,
        )
    lo, hi = (float(x) for x in args.box.split(","))
    f = _SAMPLERS[args.function]
    est = divdiff.dd_norm(f, [(lo, hi)], args.rho, M, plan)
    payload = {
        "command": "ddnorm",
        "function": args.function,
        "box": [lo, hi],
        "rho": args.rho,
        "sequence": M.to_spec(),
        "plan": plan.to_dict(),
        "estimate": est.to_dict(),
    }
    if args.format == "md":
        _emit(
            f"# Difference-quotient norm\n\nfunction {args.function} on "
            f"[{_fmt_num(lo)}, {_fmt_num(hi)}], rho {_fmt_num(args.rho)}: "
            f"**{_fmt_num(est.value)}** (binding order {list(est.binding_alpha)}, "
            f"{est.samples_used} grids)\n",
            args.out,
        )
    elif args.format == "csv":
        _emit(
            "function,rho,value,samples\n"
            f"{args.function},{_fmt_num(args.rho)},{_fmt_num(est.value)},{est.samples_used}\n",
            args.out,
        )
    else:
        _emit(_render_json(payload), args.out)
    return 0


def _cmd_curve_lemma(args) -> int:
    M = _sequence_from_args(args, args.horizon)
    Mbar = constructions.companion_sequence(M, args.theta)
    sched = constructions.build_schedule(
        M, Mbar, args.count, bump=(args.bump_c, args.bump_rho)
    )
    chain = constructions.verify_chain(sched, M)
    payload = {
        "command": "curve-lemma",
        "sequence": M.to_spec(),
        "theta": args.theta,
        "schedule": sched.to_dict(),
        "chain": chain.to_dict(),
    }
    if args.format == "md":
        rows = [
            [str(j), _fmt_num(float(sched.T[j])), _fmt_num(float(sched.t[j])),
             _fmt_num(float(sched.lambda_log[j])), _fmt_num(float(sched.s[j]))]
            for j in range(sched.J)
        ]
        text = _render_table_md(
            f"Curve-lemma schedule for {M.label()}",
            ["j", "T_j", "t_j", "ln lambda_j", "s_j"], rows)
        text += f"\nchain holds: **{chain.holds}** (C = {_fmt_num(sched.chain_C)})\n"
        _emit(text, args.out)
    elif args.format == "csv":
        rows = [
            [str(j), _fmt_num(float(sched.T[j])), _fmt_num(float(sched.t[j])),
             _fmt_num(float(sched.lambda_log[j])), _fmt_num(float(sched.s[j]))]
            for j in range(sched.J)
        ]
        _emit(_render_table_csv(["j", "T_j", "t_j", "lambda_log", "s_j"], rows), args.out)
    else:
        _emit(_render_json(payload), args.out)
    return 0 if chain.holds else 1


def _cmd_counterexample(args) -> int:
    M = _sequence_from_args(args, args.horizon)
    try:
        witness = jets.find_counterexample_witness(M, args.nmax)
    except PreconditionError as exc:
        _emit(_render_json({
            "command": "counterexample",
            "sequence": M.to_spec(),
            "error": str(exc),
        }), args.out)
        return 1
    payload_traces = []
    order = max(j + k for j, k in zip(witness.j_seq, witness.k_seq))
    f2 = jets.extremal_jet2(M, order)
    all_crossed = True
    for rho1 in args.rho1:
        trace = jets.counterexample_divergence(M, witness, rho1, f2)
        crossing = trace.threshold_crossing(args.threshold)
        all_crossed = all_crossed and crossing is not None
        payload_traces.append({
            "rho1": rho1,
            "crossing_n": crossing,
            "trace": trace.to_dict(),
        })
    payload = {
        "command": "counterexample",
        "sequence": M.to_spec(),
        "threshold": args.threshold,
        "witness": witness.to_dict(),
        "traces": payload_traces,
    }
    if args.format == "md":
        rows = [
            [str(t["rho1"]), str(t["crossing_n"])] for t in payload_traces
        ]
        _emit(_render_table_md(
            f"Exponential-law failure for {M.label()}",
            ["rho1", "n at threshold"], rows), args.out)
    elif args.format == "csv":
        rows = [[_fmt_num(t["rho1"]), str(t["crossing_n"])] for t in payload_traces]
        _emit(_render_table_csv(["rho1", "crossing_n"], rows), args.out)
    else:
        _emit(_render_json(jsonable(payload)), args.out)
    return 0 if all_crossed else 2


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carleman",
        description="Weight-sequence calculus for Denjoy-Carleman classes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="full verdict vector for a sequence")
    _add_sequence_flags(p)
    _add_common_flags(p)
    p.add_argument("--strict", action="store_true",
                   help="exit 2 when any verdict is inconclusive")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("minorants", help="increasing and log-convex minorants")
    _add_sequence_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_minorants)

    p = sub.add_parser("include", help="class inclusion test")
    p.add_argument("--left", required=True, help="family[:param] or spec file")
    p.add_argument("--right", required=True, help="family[:param] or spec file")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_include)

    p = sub.add_parser("compose", help="jet composition demo with bound check")
    p.add_argument("--outer", default="exp")
    p.add_argument("--inner", default="poly:0,1,1")
    p.add_argument("--order", type=int, default=10)
    _add_sequence_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("ddnorm", help="difference-quotient norm estimate")
    p.add_argument("--function", choices=sorted(_SAMPLERS), default="runge")
    p.add_argument("--box", default="-1,1")
    p.add_argument("--rho", type=float, default=DEFAULT_RHO)
    p.add_argument("--plan", default=None, help="JSON sampling plan file")
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--chebyshev-points", type=int, default=3)
    p.add_argument("--random-tuples", type=int, default=8)
    _add_sequence_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_ddnorm)

    p = sub.add_parser("curve-lemma", help="interpolating-curve parameter schedule")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--count", type=int, default=16, help="number of pieces J")
    p.add_argument("--bump-c", type=float, default=1.0)
    p.add_argument("--bump-rho", type=float, default=2.0)
    _add_sequence_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_curve_lemma)

    p = sub.add_parser("counterexample",
                       help="exponential-law failure for non-moderate growth")
    p.add_argument("--rho1", type=float, action="append", default=None)
    p.add_argument("--threshold", type=float, default=1e6)
    p.add_argument("--nmax", type=int, default=40)
    _add_sequence_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=_cmd_counterexample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "rho1", None) is not None and not args.rho1:
        args.rho1 = [10.0]
    if args.command == "counterexample" and args.rho1 is None:
        args.rho1 = [10.0]
    try:
        return args.func(args)
    except (CarlemanError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
