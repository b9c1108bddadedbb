"""The curve-lemma parameter schedule and its inequality chain.

Given a non-quasianalytic log-convex weight sequence M with unbounded
(M_k)^(1/k), a companion sequence Mbar with (M_k/Mbar_k)^(1/k) -> infinity
feeds the construction of a curve that interpolates a Mackey-convergent
sequence through bump-modulated affine pieces.  Everything computable about
that construction is here: the geometric support widths T_j, the centres
t_j, the modulation sizes lambda_j, the flat-piece margins s_j, and the full
derivative-bound chain

    ||c^(k)|| <= C rho^k k! Mbar_k lambda_j / T_j^k <= C rho^k k! M_k

checked in log space at every (j, k) on the horizon.  The bump function
itself is represented only by its assumed bound constants (Cbar, rho); no
analytic construction is attempted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import tails
from .errors import (
    ConsistencyError,
    ConstructionFailed,
    HorizonTooShort,
    ParameterRangeError,
    PreconditionError,
)
from .logspace import log_factorial
from .reporting import CheckResult, Verdict
from .weights import (
    TOL_ABS,
    TOL_REL,
    WeightSequence,
    derivation_closed_estimate,
    equals_comega_estimate,
    is_log_convex,
    leq_log,
    make_sequence,
    quasianalytic_verdict,
)

THETA_LADDER = (0.5, 2.0 / 3.0, 0.75, 0.875, 0.9375)


def companion_sequence(M: WeightSequence, theta: float) -> WeightSequence:
    """Scale logM by theta in (0,1) to get a strictly smaller companion.

    The companion must itself be non-quasianalytic; when the requested theta
    fails that (the scaled family crossed the quasianalytic threshold),
    theta is raised through the documented ladder until it works.
    """
    if not (0.0 < theta < 1.0):
        raise ParameterRangeError("theta must lie in (0, 1)")
    lc = is_log_convex(M)
    if not lc.holds:
        raise PreconditionError(f"M must be log-convex (fails at k={lc.witness})")
    if quasianalytic_verdict(M).verdict is not Verdict.NO:
        raise PreconditionError("M must be non-quasianalytic")
    if derivation_closed_estimate(M).verdict is Verdict.NO:
        raise PreconditionError("M must be derivation closed")
    if equals_comega_estimate(M).verdict is not Verdict.NO:
        raise PreconditionError("M must have unbounded (M_k)^(1/k)")

    tried: dict[float, str] = {}
    for th in (theta, *[t for t in THETA_LADDER if t > theta]):
        cand = _scaled(M, th)
        verdict = quasianalytic_verdict(cand).verdict
        tried[th] = verdict.value
        if verdict is Verdict.NO:
            return cand
    raise ConstructionFailed(
        "no theta in the ladder yields a non-quasianalytic companion",
        diagnostics={"tried": tried},
    )


def _scaled(M: WeightSequence, theta: float) -> WeightSequence:
    """theta-scaled sequence, staying inside the same closed-form family."""
    if M.family == "gevrey":
        return make_sequence("gevrey", M.horizon, delta=M.param * theta)
    if M.family == "logtype":
        return make_sequence("logtype", M.horizon, delta=M.param * theta)
    if M.family == "qgevrey":
        return make_sequence("qgevrey", M.horizon, q=M.param ** theta)
    return WeightSequence(theta * M.logM, "custom", None, M.horizon)


@dataclass(frozen=True, eq=False)
class CurveLemmaSchedule:
    """All parameters of the interpolating curve, with lambda in log space.

    lambda_j decays like T_j^K at the horizon and underflows any float for
    moderate J, so only ln lambda_j is stored; every check that involves it
    is a log-space inequality.
    """

    Tbar: WeightSequence
    T: np.ndarray
    t: np.ndarray
    lambda_log: np.ndarray
    s: np.ndarray
    bump_C: float
    bump_rho: float
    chain_C: float

    def __post_init__(self):
        for name in ("T", "t", "lambda_log", "s"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if len({len(self.T), len(self.t), len(self.lambda_log), len(self.s)}) != 1:
            raise ParameterRangeError("schedule arrays must share a length")

    @property
    def J(self) -> int:
        return len(self.T)

    def support_intervals(self) -> list[tuple[float, float]]:
        """Actual support of each bump piece: |t - t_j| <= T_j / 2."""
        return [
            (float(tj - Tj / 2.0), float(tj + Tj / 2.0))
            for tj, Tj in zip(self.t, self.T)
        ]

    def flat_intervals(self) -> list[tuple[float, float]]:
        """Where the curve is exactly affine: |t - t_j| <= s_j = T_j / 3."""
        return [
            (float(tj - sj), float(tj + sj)) for tj, sj in zip(self.t, self.s)
        ]

    def to_dict(self) -> dict:
        with np.errstate(under="ignore"):
            lam = np.exp(self.lambda_log)
        return {
            "companion": self.Tbar.to_spec(),
            "T": [float(x) for x in self.T],
            "t": [float(x) for x in self.t],
            "lambda_log": [float(x) for x in self.lambda_log],
            "lambda": [float(x) for x in lam],
            "s": [float(x) for x in self.s],
            "bump_C": self.bump_C,
            "bump_rho": self.bump_rho,
            "chain_C": self.chain_C,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CurveLemmaSchedule":
        from .weights import sequence_from_spec

        return cls(
            Tbar=sequence_from_spec(d["companion"]),
            T=np.asarray(d["T"], dtype=float),
            t=np.asarray(d["t"], dtype=float),
            lambda_log=np.asarray(d["lambda_log"], dtype=float),
            s=np.asarray(d["s"], dtype=float),
            bump_C=float(d["bump_C"]),
            bump_rho=float(d["bump_rho"]),
            chain_C=float(d["chain_C"]),
        )


def build_schedule(
    M: WeightSequence,
    Mbar: WeightSequence,
    J: int,
    bump: tuple[float, float] = (1.0, 2.0),
) -> CurveLemmaSchedule:
    """Construct and fully check the schedule.

    T_j = 2^-j (geometric, so the support layout is closed form),
    t_k = 2 sum_{j<k} T_j + T_k, s_j = T_j/3, and lambda_j is half the
    horizon minimum of T_j^k M_k / Mbar_k, which keeps the chain inequality
    strict with margin.
    """
    if not (1 <= J <= 64):
        raise ParameterRangeError("J must be in 1..64")
    bump_C, bump_rho = float(bump[0]), float(bump[1])
    if bump_C <= 0 or bump_rho <= 0:
        raise ParameterRangeError("bump constants must be positive")
    K = min(M.horizon, Mbar.horizon)
    if K < 8:
        raise HorizonTooShort("need horizon >= 8")
    D = M.logM[1:K + 1] - Mbar.logM[1:K + 1]  # ln(M_k/Mbar_k), k = 1..K
    if np.any(D < -TOL_ABS):
        raise PreconditionError("companion must satisfy Mbar <= M pointwise")
    ks = np.arange(1, K + 1, dtype=float)
    sep = tails.sup_trend(ks, values=D / ks)
    if M.family == "custom" or Mbar.family == "custom":
        if sep.trend is not tails.Trend.UNBOUNDED:
            raise PreconditionError(
                "companion separation (M_k/Mbar_k)^(1/k) must grow unboundedly"
            )

    j = np.arange(J, dtype=float)
    T = 2.0 ** (-j)
    prefix = np.concatenate([[0.0], np.cumsum(T)[:-1]])
    t = 2.0 * prefix + T
    s = T / 3.0
    log_T = -j * math.log(2.0)
    # lambda_j = (1/2) min_k T_j^k M_k / Mbar_k, in log space.
    minimand = log_T[:, None] * ks[None, :] + D[None, :]
    lambda_log = -math.log(2.0) + np.min(minimand, axis=1)
    if not np.all(np.isfinite(lambda_log)):
        raise HorizonTooShort("lambda underflowed the log range")

    sched = CurveLemmaSchedule(
        Tbar=Mbar,
        T=T,
        t=t,
        lambda_log=lambda_log,
        s=s,
        bump_C=bump_C,
        bump_rho=bump_rho,
        chain_C=bump_C * (1.5 + 1.0 / bump_rho),
    )
    _check_schedule_invariants(sched, M)
    return sched


def _check_schedule_invariants(sched: CurveLemmaSchedule, M: WeightSequence) -> None:
    T, t, s = sched.T, sched.t, sched.s
    J = sched.J
    # Geometric partial sums match the closed form to float accuracy and the
    # increment ratio certifies the Cauchy property analytically.
    partial = np.cumsum(T)
    closed = 2.0 * (1.0 - 2.0 ** (-np.arange(1, J + 1, dtype=float)))
    if np.max(np.abs(partial - closed)) > 1e-12:
        raise ConsistencyError("partial sums of T deviate from the closed form")
    if np.any(T > 1.0) or np.any(T <= 0.0):
        raise ConsistencyError("T_j must lie in (0, 1]")
    if J > 1 and np.max(T[1:] / T[:-1]) > 0.5 + 1e-12:
        raise ConsistencyError("T must contract geometrically")
    # t_k = 2 sum_{j<k} T_j + T_k, exactly.
    prefix = np.concatenate([[0.0], np.cumsum(T)[:-1]])
    if np.max(np.abs(t - (2.0 * prefix + T))) > 0.0:
        raise ConsistencyError("t_k identity violated")
    if np.max(np.abs(s - T / 3.0)) > 0.0:
        raise ConsistencyError("s_j must equal T_j / 3")
    # Supports |t - t_j| <= T_j/2 are pairwise disjoint with a positive gap.
    supp = sched.support_intervals()
    for (a_lo, a_hi), (b_lo, b_hi) in zip(supp, supp[1:]):
        if not b_lo > a_hi:
            raise ConsistencyError("support intervals are not disjoint")
    # 0 < lambda_j/T_j^k <= M_k/Mbar_k for every j, k on the horizon.
    K = min(M.horizon, sched.Tbar.horizon)
    ks = np.arange(1, K + 1, dtype=float)
    D = M.logM[1:K + 1] - sched.Tbar.logM[1:K + 1]
    log_T = np.log(T)
    ratio = sched.lambda_log[:, None] - log_T[:, None] * ks[None, :]
    bad = ratio > D[None, :] + np.maximum(TOL_ABS, TOL_REL * np.abs(D[None, :]))
    if np.any(bad):
        jj, kk = np.argwhere(bad)[0]
        raise ConsistencyError(f"lambda bound fails at (j={jj}, k={kk + 1})")
    # lambda_j / T_j^k -> 0 in j for each fixed k < K (at k = K exactly the
    # binding order the ratio plateaus at the horizon; documented).
    if J >= 3:
        for k in (1, K // 2, K - 1):
            v = sched.lambda_log + k * (-log_T)
            w = tails.tail_window(J)
            tail_diffs = np.diff(v[-w:])
            if not np.all(tail_diffs < 0.0):
                raise ConsistencyError(f"lambda_j/T_j^{k} does not decay in j")


@dataclass(frozen=True)
class ChainReport:
    """Outcome of the full derivative-bound chain scan."""

    holds: bool
    witness: tuple[int, int] | None
    max_slack: float
    constant_consistent: bool

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "witness": list(self.witness) if self.witness else None,
            "max_slack": self.max_slack,
            "constant_consistent": self.constant_consistent,
        }


def verify_chain(sched: CurveLemmaSchedule, M: WeightSequence) -> ChainReport:
    """Scan ln C + k ln rho + ln k! + ln Mbar_k + ln(lambda_j/T_j^k) <= same + ln M_k.

    All constants are carried on both sides so the scan certifies the chain
    as displayed, not just the reduced middle inequality.  Also re-derives
    the chain constant C = Cbar (3/2 + 1/rho) from the two-term derivative
    estimate: the (1 + T/2) factor is at most 3/2 for T <= 1, and the
    first-derivative term contributes the 1/rho once k (k-1)! = k! and the
    companion's monotonicity absorb the rest.
    """
    K = min(M.horizon, sched.Tbar.horizon)
    ks = np.arange(1, K + 1, dtype=float)
    lf = np.array([log_factorial(int(k)) for k in range(1, K + 1)])
    log_rho = math.log(sched.bump_rho)
    log_C = math.log(sched.chain_C)
    common = log_C + ks * log_rho + lf
    lhs = (
        common[None, :]
        + sched.Tbar.logM[1:K + 1][None, :]
        + sched.lambda_log[:, None]
        - np.log(sched.T)[:, None] * ks[None, :]
    )
    rhs = common[None, :] + M.logM[1:K + 1][None, :]
    tol = np.maximum(TOL_ABS, TOL_REL * np.maximum(np.abs(lhs), np.abs(rhs)))
    bad = lhs > rhs + tol
    witness = None
    if np.any(bad):
        jj, kk = np.argwhere(bad)[0]
        witness = (int(jj), int(kk + 1))
    max_slack = float(np.max(lhs - rhs))

    constant_ok = abs(
        sched.chain_C - sched.bump_C * (1.5 + 1.0 / sched.bump_rho)
    ) <= TOL_ABS * max(1.0, sched.chain_C)
    # (1 + T_j/2) <= 3/2 for every piece.
    if np.any(1.0 + sched.T / 2.0 > 1.5 + TOL_ABS):
        constant_ok = False
    # k T^{1-k} rho^{k-1} (k-1)! Mbar_{k-1} <= T^{-k} T (1/rho) rho^k k! Mbar_k.
    lbar = sched.Tbar.logM
    for k in range(1, K + 1):
        lhs_k = (
            math.log(k)
            + (k - 1) * log_rho
            + log_factorial(k - 1)
            + float(lbar[k - 1])
        )
        rhs_k = -log_rho + k * log_rho + log_factorial(k) + float(lbar[k])
        if not leq_log(lhs_k, rhs_k):  # the T powers cancel against T * T^-k
            constant_ok = False
            break
    return ChainReport(
        holds=witness is None,
        witness=witness,
        max_slack=max_slack,
        constant_consistent=constant_ok,
    )


def tampered(sched: CurveLemmaSchedule, factor: float = 10.0) -> CurveLemmaSchedule:
    """A copy with every lambda_j scaled; used to show the chain scan bites."""
    return replace(sched, lambda_log=sched.lambda_log + math.log(factor))
