"""Truncated Taylor jets, Faa di Bruno composition and growth certificates.

A jet stores the coefficients a_k = f^(k)(base)/k! up to an order horizon K.
Two parallel representations are kept: signed-log floats for growth analytics
and (optionally) exact rationals for combinatorial identities.  Whenever the
exact lane is present the float lane is derived from it, so the two always
agree to representation precision.

The composition of jets is implemented twice on purpose: the Faa di Bruno sum
over ordered integer compositions (the formula under test, capped at order
20 since there are 2^(k-1) tuples per order), and Horner-style truncated
polynomial substitution (the production path for higher orders).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import tails
from .enumeration import binomial, compositions
from .errors import (
    HorizonError,
    HorizonExhausted,
    ParameterRangeError,
    PreconditionError,
)
from .logspace import ONE, ZERO, SignedLog, log_factorial, signed_log_sum
from .reporting import CheckResult, Verdict, VerdictWithEvidence
from .weights import (
    TOL_ABS,
    TOL_REL,
    WeightSequence,
    is_log_convex,
    leq_log,
    moderate_growth_estimate,
)

ENUMERATION_CAP = 20


def _logs_from_fractions(fracs: Iterable[Fraction]) -> tuple[SignedLog, ...]:
    return tuple(SignedLog.from_fraction(f) for f in fracs)


@dataclass(frozen=True, eq=False)
class Jet:
    """Truncated expansion around ``base`` with coefficients a_k = f^(k)/k!."""

    base: float
    coeffs: tuple[SignedLog, ...]
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ParameterRangeError("a jet needs at least the order-0 coefficient")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.exact is not None:
            object.__setattr__(self, "exact", tuple(self.exact))
            if len(self.exact) != len(self.coeffs):
                raise ParameterRangeError("exact lane length mismatch")
            for k, (sl, fr) in enumerate(zip(self.coeffs, self.exact)):
                ref = SignedLog.from_fraction(fr)
                if ref.sign != sl.sign:
                    raise ParameterRangeError(f"lane sign mismatch at k={k}")
                if ref.sign != 0:
                    gap = abs(ref.log_mag - sl.log_mag)
                    if gap > 1e-12 * max(1.0, abs(ref.log_mag)):
                        raise ParameterRangeError(f"lane magnitude mismatch at k={k}")
        for k, sl in enumerate(self.coeffs):
            if sl.sign != 0 and not math.isfinite(sl.log_mag):
                raise ParameterRangeError(f"non-finite coefficient at k={k}")

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> SignedLog:
        """The order-0 coefficient, i.e. the function value at the base."""
        return self.coeffs[0]

    def coefficient_logs(self) -> np.ndarray:
        """ln|a_k| as an array; -inf where the coefficient vanishes."""
        return np.array([c.log_mag for c in self.coeffs])

    def to_dict(self) -> dict:
        out = {
            "base": self.base,
            "K": self.K,
            "coeffs": [
                {"sign": c.sign, "log_mag": c.log_mag if c.sign != 0 else 0.0}
                for c in self.coeffs
            ],
        }
        if self.exact is not None:
            out["exact"] = [[str(f.numerator), str(f.denominator)] for f in self.exact]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Jet":
        exact = None
        if d.get("exact") is not None:
            exact = tuple(Fraction(int(n), int(dn)) for n, dn in d["exact"])
            coeffs = _logs_from_fractions(exact)
        else:
            coeffs = tuple(
                SignedLog(int(c["sign"]), float(c["log_mag"]) if c["sign"] else -math.inf)
                for c in d["coeffs"]
            )
        return cls(base=float(d["base"]), coeffs=coeffs, exact=exact)


def jet_from_values(base: float, values: Iterable[float]) -> Jet:
    return Jet(base, tuple(SignedLog.from_float(v) for v in values))


def jet_from_fractions(base: float, fracs: Iterable[Fraction]) -> Jet:
    fr = tuple(Fraction(f) for f in fracs)
    return Jet(base, _logs_from_fractions(fr), exact=fr)


def zero_jet(order: int, base: float = 0.0) -> Jet:
    return jet_from_fractions(base, [Fraction(0)] * (order + 1))


def exp_jet(order: int, at: float = 0.0) -> Jet:
    """Jet of exp at ``at``; exact lane only at the origin."""
    if at == 0.0:
        return jet_from_fractions(
            0.0, [Fraction(1, math.factorial(k)) for k in range(order + 1)]
        )
    coeffs = tuple(
        SignedLog(1, at - log_factorial(k)) for k in range(order + 1)
    )
    return Jet(float(at), coeffs)


def identity_jet(value, order: int) -> Jet:
    """Jet of y -> y expanded where it takes the given value."""
    fr = [Fraction(value), Fraction(1)] + [Fraction(0)] * (order - 1)
    return jet_from_fractions(float(value), fr)


def geometric_jet(ratio, order: int, base: float = 0.0) -> Jet:
    fr = [Fraction(ratio) ** k for k in range(order + 1)]
    return jet_from_fractions(base, fr)


def polynomial_jet(coeffs, order: int | None = None, base=0) -> Jet:
    """Jet of a polynomial, recentred exactly at ``base`` by binomial shift."""
    cs = [Fraction(c) for c in coeffs]
    v = Fraction(base)
    deg = len(cs) - 1
    K = deg if order is None else order
    shifted = []
    for j in range(K + 1):
        acc = Fraction(0)
        for m in range(j, deg + 1):
            acc += cs[m] * binomial(m, j) * v ** (m - j)
        shifted.append(acc)
    return jet_from_fractions(float(v), shifted)


def extremal_jet(M: WeightSequence) -> Jet:
    """The formal jet with a_k = M_k, i.e. f^(k)(0) = k! M_k.

    This is the boundary payload of the growth certificate: every weight
    sequence admits a function whose derivatives at 0 reach k! M_k, and the
    jet here carries exactly those coefficients (no underlying function is
    constructed).
    """
    coeffs = tuple(SignedLog(1, float(x)) for x in M.logM)
    return Jet(0.0, coeffs)


# ---------------------------------------------------------------------------
# jet algebra
# ---------------------------------------------------------------------------

def _require_same_base(f: Jet, g: Jet, op: str) -> None:
    if f.base != g.base:
        raise PreconditionError(f"{op} requires matching expansion points")


def jet_add(f: Jet, g: Jet) -> Jet:
    _require_same_base(f, g, "jet_add")
    K = min(f.K, g.K)
    if f.exact is not None and g.exact is not None:
        ex = tuple(f.exact[k] + g.exact[k] for k in range(K + 1))
        return Jet(f.base, _logs_from_fractions(ex), exact=ex)
    coeffs = tuple(f.coeffs[k] + g.coeffs[k] for k in range(K + 1))
    return Jet(f.base, coeffs)


def jet_mul(f: Jet, g: Jet) -> Jet:
    """Cauchy product c_k = sum_{i+j=k} a_i b_j, truncated at min horizon."""
    _require_same_base(f, g, "jet_mul")
    K = min(f.K, g.K)
    if f.exact is not None and g.exact is not None:
        ex = tuple(
            sum((f.exact[i] * g.exact[k - i] for i in range(k + 1)), Fraction(0))
            for k in range(K + 1)
        )
        return Jet(f.base, _logs_from_fractions(ex), exact=ex)
    coeffs = tuple(
        signed_log_sum(f.coeffs[i] * g.coeffs[k - i] for i in range(k + 1))
        for k in range(K + 1)
    )
    return Jet(f.base, coeffs)


def jet_derive(f: Jet) -> Jet:
    """Coefficient shift a'_k = (k+1) a_{k+1}; horizon drops by one."""
    if f.K < 1:
        raise HorizonError("cannot derive an order-0 jet")
    if f.exact is not None:
        ex = tuple(f.exact[k + 1] * (k + 1) for k in range(f.K))
        return Jet(f.base, _logs_from_fractions(ex), exact=ex)
    coeffs = tuple(
        f.coeffs[k + 1] * SignedLog.from_float(k + 1) for k in range(f.K)
    )
    return Jet(f.base, coeffs)


def jet_antiderive(f: Jet, c0) -> Jet:
    """Antiderivative jet with constant term c0; horizon grows by one."""
    if f.exact is not None:
        ex = (Fraction(c0),) + tuple(f.exact[k - 1] / k for k in range(1, f.K + 2))
        return Jet(f.base, _logs_from_fractions(ex), exact=ex)
    coeffs = (SignedLog.from_float(float(c0)),) + tuple(
        f.coeffs[k - 1] / SignedLog.from_float(k) for k in range(1, f.K + 2)
    )
    return Jet(f.base, coeffs)


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def _check_compose_bases(f: Jet, c: Jet) -> None:
    # f must be expanded at the inner jet's value c(base).  The base field is
    # a float, so the comparison tolerates its rounding of an exact value.
    inner = float(c.exact[0]) if c.exact is not None else c.value.value
    if abs(f.base - inner) > 1e-9 * max(1.0, abs(f.base), abs(inner)):
        raise PreconditionError(
            f"outer base {f.base!r} differs from inner value {inner!r}"
        )


def _compose_enumerate(f: Jet, c: Jet, K: int) -> Jet:
    """Faa di Bruno: comp_k = sum_j b_j * sum over compositions of prod a_{alpha_i}."""
    exact = f.exact is not None and c.exact is not None
    if exact:
        b = f.exact
        a = c.exact
        out = [b[0]]
        for k in range(1, K + 1):
            per_j = [Fraction(0)] * (k + 1)
            for alpha in compositions(k):
                term = Fraction(1)
                for ai in alpha:
                    term *= a[ai]
                per_j[len(alpha)] += term
            out.append(sum((b[j] * per_j[j] for j in range(1, k + 1)), Fraction(0)))
        ex = tuple(out)
        return Jet(c.base, _logs_from_fractions(ex), exact=ex)
    b = f.coeffs
    a = c.coeffs
    out_logs = [b[0]]
    for k in range(1, K + 1):
        per_j: list[list[SignedLog]] = [[] for _ in range(k + 1)]
        for alpha in compositions(k):
            term = ONE
            for ai in alpha:
                term = term * a[ai]
            per_j[len(alpha)].append(term)
        total = signed_log_sum(
            b[j] * signed_log_sum(per_j[j]) for j in range(1, k + 1)
        )
        out_logs.append(total)
    return Jet(c.base, tuple(out_logs))


def jet_substitute(f: Jet, c: Jet) -> Jet:
    """Truncated polynomial substitution of c - c(base) into f, by Horner."""
    _check_compose_bases(f, c)
    K = min(f.K, c.K)
    exact = f.exact is not None and c.exact is not None
    if exact:
        u = (Fraction(0),) + c.exact[1:K + 1]
        acc = [f.exact[K]] + [Fraction(0)] * K
        for j in range(K - 1, -1, -1):
            new = [Fraction(0)] * (K + 1)
            for i in range(K + 1):
                if acc[i] == 0:
                    continue
                for m in range(0, K + 1 - i):
                    if u[m] != 0:
                        new[i + m] += acc[i] * u[m]
            new[0] += f.exact[j]
            acc = new
        ex = tuple(acc)
        return Jet(c.base, _logs_from_fractions(ex), exact=ex)
    u = (ZERO,) + c.coeffs[1:K + 1]
    acc = [f.coeffs[K]] + [ZERO] * K
    for j in range(K - 1, -1, -1):
        new = [ZERO] * (K + 1)
        for i in range(K + 1):
            if acc[i].is_zero():
                continue
            for m in range(0, K + 1 - i):
                if not u[m].is_zero():
                    new[i + m] = new[i + m] + acc[i] * u[m]
        new[0] = new[0] + f.coeffs[j]
        acc = new
    return Jet(c.base, tuple(acc))


def jet_compose(f: Jet, c: Jet) -> Jet:
    """Composition f(c(.)) truncated at the common horizon.

    Orders up to 20 go through the composition-sum formula; beyond that the
    enumeration is infeasible (2^(k-1) tuples) and substitution is used.
    """
    _check_compose_bases(f, c)
    K = min(f.K, c.K)
    if K <= ENUMERATION_CAP:
        return _compose_enumerate(f, c, K)
    return jet_substitute(f, c)


def composition_count_check(k: int) -> dict[int, int]:
    """Enumerate compositions of k and tally per part count.

    Raises if the tally disagrees with C(k-1, j-1) or the total with 2^(k-1).
    """
    if not (1 <= k <= ENUMERATION_CAP):
        raise ParameterRangeError(f"k must be in 1..{ENUMERATION_CAP}")
    counts: dict[int, int] = {}
    for alpha in compositions(k):
        counts[len(alpha)] = counts.get(len(alpha), 0) + 1
    for j, n in counts.items():
        if n != binomial(k - 1, j - 1):
            raise ParameterRangeError(f"count mismatch at j={j}: {n}")
    if sum(counts.values()) != 2 ** (k - 1):
        raise ParameterRangeError("total composition count mismatch")
    return dict(sorted(counts.items()))


# ---------------------------------------------------------------------------
# growth certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GrowthFit:
    """Constants (C, rho) with |a_k| <= C rho^k M_k on the jet's horizon.

    Stored in log space; rho is the horizon max of the per-order rate
    ((ln|a_k| - ln M_k)/k), clamped below at rho_min, which is the smallest
    rho whose certificate closes with C = 1 at the binding order.
    """

    log_rho: float
    log_C: float
    M: WeightSequence
    achieved_at: int | None

    @property
    def rho(self) -> float:
        return math.exp(self.log_rho) if self.log_rho < 700 else math.inf

    @property
    def C(self) -> float:
        if self.log_C == -math.inf:
            return 0.0
        return math.exp(self.log_C) if self.log_C < 700 else math.inf

    def to_dict(self) -> dict:
        return {
            "log_rho": self.log_rho,
            "log_C": self.log_C if self.log_C != -math.inf else None,
            "achieved_at": self.achieved_at,
            "rho": self.rho if math.isfinite(self.rho) else None,
            "C": self.C if math.isfinite(self.C) else None,
        }


def fit_growth(f: Jet, M: WeightSequence, rho_min: float = 1e-6) -> GrowthFit:
    """Fit certificate constants to a jet against a weight sequence."""
    if f.K > M.horizon:
        raise HorizonError("jet order exceeds the sequence horizon")
    if rho_min <= 0:
        raise ParameterRangeError("rho_min must be positive")
    logs = f.coefficient_logs()
    L = M.logM[: f.K + 1]
    best = -math.inf
    arg = None
    for k in range(1, f.K + 1):
        if f.coeffs[k].sign == 0:
            continue
        rate = (logs[k] - L[k]) / k
        if rate > best:
            best = rate
            arg = k
    log_rho = max(best, math.log(rho_min))
    terms = [logs[0] if f.coeffs[0].sign != 0 else -math.inf]
    for k in range(1, f.K + 1):
        if f.coeffs[k].sign != 0:
            terms.append(logs[k] - k * log_rho - L[k])
    log_C = max(terms)
    return GrowthFit(log_rho=log_rho, log_C=log_C, M=M, achieved_at=arg)


def certificate_holds(f: Jet, fit: GrowthFit, slack: float = 1e-9) -> bool:
    """|a_k| <= C rho^k M_k for every order, within log-space slack."""
    L = fit.M.logM
    for k in range(f.K + 1):
        if f.coeffs[k].sign == 0:
            continue
        bound = fit.log_C + k * fit.log_rho + L[k]
        lhs = f.coeffs[k].log_mag
        if lhs > bound + max(slack, slack * abs(bound)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class CompositionBound:
    """A-priori coefficient bound for f(c(.)) from the two certificates.

    With |b_j| <= C_f rho_f^j M_j and |a_i| <= C_c rho_c^i M_i, the
    composition-sum estimate together with the log-convexity inequality
    M_1^k M_k >= M_j M_{a_1}...M_{a_j} collapses the part-count sum to

        |comp_k| <= C_f * rho_* (1+rho_*)^(k-1) * M_1^k * rho_c^k * M_k

    for k >= 1 with the effective inner rate rho_* = rho_f * C_c (the inner
    certificate constant folded into the outer rate), and |comp_0| <= C_f.
    ``fit`` is the same bound relaxed to plain certificate form.
    """

    fit: GrowthFit
    log_rho_star: float
    log_bound: np.ndarray

    def to_dict(self) -> dict:
        return {
            "fit": self.fit.to_dict(),
            "log_rho_star": self.log_rho_star,
            "log_bound": [float(x) for x in self.log_bound],
        }


def composition_stability_bound(
    fitF: GrowthFit, fitC: GrowthFit, M: WeightSequence
) -> CompositionBound:
    """Bound the composed jet's coefficients before composing."""
    lc = is_log_convex(M)
    if not lc.holds:
        raise PreconditionError(f"M must be log-convex (fails at k={lc.witness})")
    if M.shifted:
        raise PreconditionError("M must have M_0 = 1")
    for fit in (fitF, fitC):
        if fit.M.horizon < M.horizon or not np.allclose(
            fit.M.logM[: M.horizon + 1], M.logM, rtol=0, atol=0
        ):
            raise PreconditionError("certificates must reference the same sequence")
    K = M.horizon
    L = M.logM
    log_rho_star = fitF.log_rho + fitC.log_C
    log_one_plus = float(np.logaddexp(0.0, log_rho_star))
    ks = np.arange(K + 1, dtype=float)
    log_bound = (
        fitF.log_C
        + log_rho_star
        + (ks - 1.0) * log_one_plus
        + ks * L[1]
        + ks * fitC.log_rho
        + L[: K + 1]
    )
    log_bound[0] = fitF.log_C
    cert = GrowthFit(
        log_rho=log_one_plus + L[1] + fitC.log_rho,
        log_C=fitF.log_C,
        M=M,
        achieved_at=None,
    )
    return CompositionBound(fit=cert, log_rho_star=log_rho_star, log_bound=log_bound)


def antiderivative_bound_check(M: WeightSequence, rho: float) -> CheckResult:
    """M_k / ((k+1) M_{k+1}) <= 1/M_1 for all k below the horizon.

    rho cancels from both sides of the antiderivative estimate; it is kept in
    the signature because the inequality is used with the rho-scaled norms.
    Guaranteed for log-convex sequences; witnesses are reported for custom
    input where k + 1 < M_1.
    """
    if rho <= 0:
        raise ParameterRangeError("rho must be positive")
    L = M.logM
    for k in range(M.horizon):
        lhs = L[k] - L[k + 1] - math.log(k + 1)
        if not leq_log(lhs, -L[1]):
            return CheckResult(False, witness=k, detail={
                "lhs_log": lhs, "rhs_log": -L[1], "rho": rho})
    return CheckResult(True, detail={"rho": rho})


# ---------------------------------------------------------------------------
# rapidly decaying test sequences
# ---------------------------------------------------------------------------

DECAY_KINDS = ("inverse_factorial", "gaussian")


def make_decay_sequence(kind: str, horizon: int) -> np.ndarray:
    """Log values of a test sequence r with r_k t^k -> 0 for every t.

    Both built-ins additionally satisfy r_k r_l >= r_{k+l}:
    ``inverse_factorial`` is r_k = 1/k!, ``gaussian`` is r_k = exp(-k^2).
    """
    if kind == "inverse_factorial":
        return -np.array([log_factorial(k) for k in range(horizon + 1)])
    if kind == "gaussian":
        return -np.arange(horizon + 1, dtype=float) ** 2
    raise ParameterRangeError(f"unknown decay kind {kind!r}")


def check_supermultiplicative(log_r: np.ndarray) -> CheckResult:
    """r_k r_l >= r_{k+l} for all k + l within the horizon."""
    K = len(log_r) - 1
    for k in range(K + 1):
        for l in range(k, K - k + 1):
            if not leq_log(log_r[k + l], log_r[k] + log_r[l]):
                return CheckResult(False, witness=(k, l))
    return CheckResult(True)


def check_decay(log_r: np.ndarray, probes=(0.5, 1.0, 2.0, 10.0)) -> CheckResult:
    """Horizon trend check that r_k t^k -> 0 for each probe t."""
    K = len(log_r) - 1
    ks = np.arange(K + 1, dtype=float)
    for t in probes:
        v = log_r + ks * math.log(t)
        w = tails.tail_window(len(v))
        tail = v[-w:]
        if not np.all(np.diff(tail) < 0):
            return CheckResult(False, witness=t, detail={"reason": "tail not decreasing"})
        if v[-1] > np.max(v) - math.log(1e6):
            return CheckResult(False, witness=t, detail={"reason": "no decay margin"})
    return CheckResult(True)


def decay_weighted_sup(f: Jet, M: WeightSequence, log_r: np.ndarray) -> VerdictWithEvidence:
    """sup_k |f^(k)(0)| r_k / (k! M_k) = sup_k |a_k| r_k / M_k with trend.

    Verdict yes means bounded at the horizon; for certified jets this is
    forced by r_k rho^k -> 0, and a growing trend flags coefficients that no
    finite growth rate certifies.
    """
    if f.K > M.horizon or f.K + 1 > len(log_r):
        raise HorizonError("jet order exceeds the sequence or decay horizon")
    u = np.array([
        (f.coeffs[k].log_mag + log_r[k] - M.logM[k]) if f.coeffs[k].sign != 0 else -math.inf
        for k in range(f.K + 1)
    ])
    diag = tails.sup_trend(np.arange(f.K + 1), log_values=u)
    verdict = {
        tails.Trend.BOUNDED: Verdict.YES,
        tails.Trend.UNBOUNDED: Verdict.NO,
        tails.Trend.INCONCLUSIVE: Verdict.INCONCLUSIVE,
    }[diag.trend]
    evidence = {
        "log_sup": diag.sup,
        "sup": math.exp(diag.sup) if diag.sup < 700 else None,
        "at_k": diag.at,
        "trend": diag.trend.value,
        "slope": diag.slope,
    }
    return VerdictWithEvidence(verdict, evidence)


# ---------------------------------------------------------------------------
# the bivariate counterexample engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Jet2:
    """Bivariate coefficient container: alpha -> d^alpha f(base)/alpha!.

    Exists only to hold the counterexample payload; no bivariate calculus is
    performed on it.  The index set is exactly {alpha : |alpha| <= order}.
    """

    base: tuple[float, float]
    order: int
    coeffs: dict[tuple[int, int], SignedLog]

    def __post_init__(self):
        expected = {
            (i, j)
            for i in range(self.order + 1)
            for j in range(self.order + 1 - i)
        }
        if set(self.coeffs) != expected:
            raise ParameterRangeError("coefficient index set must be {|alpha| <= order}")
        for alpha, c in self.coeffs.items():
            if c.sign != 0 and not math.isfinite(c.log_mag):
                raise ParameterRangeError(f"non-finite coefficient at {alpha}")

    def log_partial(self, alpha: tuple[int, int]) -> float:
        """ln |d^alpha f(base)| = ln |coeff| + ln alpha!."""
        c = self.coeffs[alpha]
        if c.sign == 0:
            return -math.inf
        return c.log_mag + log_factorial(alpha[0]) + log_factorial(alpha[1])


def extremal_jet2(M: WeightSequence, order: int) -> Jet2:
    """The bivariate jet with d^alpha f(0,0) = |alpha|! M_|alpha|."""
    if order > M.horizon:
        raise HorizonError("order exceeds the sequence horizon")
    coeffs = {}
    for i in range(order + 1):
        for j in range(order + 1 - i):
            s = i + j
            coeffs[(i, j)] = SignedLog(
                1,
                log_factorial(s) + float(M.logM[s])
                - log_factorial(i) - log_factorial(j),
            )
    return Jet2(base=(0.0, 0.0), order=order, coeffs=coeffs)


@dataclass(frozen=True, eq=False)
class CounterexampleWitness:
    """Indices (j_n, k_n) with (M_{j+k}/(M_j M_k))^(1/(j+k)) >= n, j_n strictly up."""

    j_seq: tuple[int, ...]
    k_seq: tuple[int, ...]
    n_max: int

    def __post_init__(self):
        if len(self.j_seq) != self.n_max or len(self.k_seq) != self.n_max:
            raise ParameterRangeError("witness arrays must have n_max entries")
        if any(b <= a for a, b in zip(self.j_seq, self.j_seq[1:])):
            raise ParameterRangeError("j_seq must be strictly increasing")
        if any(k <= 0 for k in self.k_seq):
            raise ParameterRangeError("k_seq must be positive")

    def to_dict(self) -> dict:
        return {"j_seq": list(self.j_seq), "k_seq": list(self.k_seq), "n_max": self.n_max}

    @classmethod
    def from_dict(cls, d: dict) -> "CounterexampleWitness":
        return cls(tuple(d["j_seq"]), tuple(d["k_seq"]), int(d["n_max"]))


def witness_ratio_log(M: WeightSequence, j: int, k: int) -> float:
    """ln (M_{j+k}/(M_j M_k))^(1/(j+k))."""
    L = M.logM
    return (float(L[j + k]) - float(L[j]) - float(L[k])) / (j + k)


def validate_witness(M: WeightSequence, w: CounterexampleWitness) -> None:
    for n in range(1, w.n_max + 1):
        j, k = w.j_seq[n - 1], w.k_seq[n - 1]
        if j + k > M.horizon:
            raise HorizonError(f"witness {n} exceeds horizon")
        if witness_ratio_log(M, j, k) < math.log(n) - TOL_ABS:
            raise PreconditionError(f"witness ratio below n at n={n}")


def find_counterexample_witness(M: WeightSequence, n_max: int) -> CounterexampleWitness:
    """Search the (j, k) grid for the failure-of-moderate-growth witnesses.

    Requires a sequence whose moderate-growth verdict is no.  The search is
    diagonal-first (k = j), then expanding |j - k|, with j forced strictly
    above the previous witness; this makes the result reproducible.
    """
    mg = moderate_growth_estimate(M)
    if mg.verdict is not Verdict.NO:
        raise PreconditionError(
            f"sequence must fail moderate growth (verdict: {mg.verdict.value})"
        )
    K = M.horizon
    js: list[int] = []
    ks: list[int] = []
    j_prev = 0
    for n in range(1, n_max + 1):
        target = math.log(n) - TOL_ABS
        found = None
        for j in range(j_prev + 1, K):
            for k in _expanding_k(j, K):
                if witness_ratio_log(M, j, k) >= target:
                    found = (j, k)
                    break
            if found:
                break
        if found is None:
            raise HorizonExhausted(
                f"no witness for n={n} within horizon {K}",
                achieved_n=n - 1,
                partial=(tuple(js), tuple(ks)),
            )
        js.append(found[0])
        ks.append(found[1])
        j_prev = found[0]
    return CounterexampleWitness(tuple(js), tuple(ks), n_max)


def _expanding_k(j: int, K: int):
    """k candidates for a fixed j: the diagonal first, then widening |j - k|."""
    if j + j <= K:
        yield j
    d = 1
    while True:
        lo, hi = j - d, j + d
        emitted = False
        if lo >= 1 and j + lo <= K:
            emitted = True
            yield lo
        if j + hi <= K:
            emitted = True
            yield hi
        if not emitted and lo < 1:
            return
        d += 1


@dataclass(frozen=True, eq=False)
class DivergenceTrace:
    """Lower-bound traces showing the exponential-law functional blows up."""

    rho1: float
    n_values: tuple[int, ...]
    log_lower: np.ndarray           # full per-n lower bound, log space
    log_lower_running: np.ndarray   # running max of the above
    log_simplified: np.ndarray      # k_n (ln n - ln rho1)
    c_rho: dict[float, np.ndarray]  # partial sums of sum (rho/n)^{j_n}

    def threshold_crossing(self, threshold: float) -> int | None:
        """Smallest n whose running lower bound exceeds the threshold."""
        target = math.log(threshold)
        idx = np.flatnonzero(self.log_lower_running >= target)
        return int(self.n_values[idx[0]]) if len(idx) else None

    def to_dict(self) -> dict:
        return {
            "rho1": self.rho1,
            "n_values": list(self.n_values),
            "log_lower": [float(x) for x in self.log_lower],
            "log_lower_running": [float(x) for x in self.log_lower_running],
            "log_simplified": [float(x) for x in self.log_simplified],
            "c_rho": {
                repr(r): [float(x) for x in v] for r, v in self.c_rho.items()
            },
        }


def counterexample_divergence(
    M: WeightSequence,
    w: CounterexampleWitness,
    rho1: float,
    f: Jet2,
    c_rhos: tuple[float, ...] = (1.0, 2.0),
) -> DivergenceTrace:
    """Evaluate the divergence chain of the failing exponential law.

    The dual-pairing term at index n is

        L_n = d^(j_n,k_n) f(0,0) / (rho1^{k_n} k_n! j_n! M_{k_n} M_{j_n} n^{j_n})

    which the witness property bounds below by (n/rho1)^{k_n}; alongside, the
    continuity-side constant C(rho) = sum_n (rho/n)^{j_n} stays finite, so
    the functional itself is well defined.
    """
    if rho1 <= 0:
        raise ParameterRangeError("rho1 must be positive")
    validate_witness(M, w)
    L = M.logM
    # The payload must be the canonical extremal bivariate jet for M.
    for n in range(1, w.n_max + 1):
        alpha = (w.j_seq[n - 1], w.k_seq[n - 1])
        if alpha[0] + alpha[1] > f.order:
            raise PreconditionError(f"payload order too small for witness {n}")
        want = log_factorial(alpha[0] + alpha[1]) + float(L[alpha[0] + alpha[1]])
        got = f.log_partial(alpha)
        if abs(got - want) > max(TOL_ABS, TOL_REL * abs(want)):
            raise PreconditionError(
                f"payload is not the extremal bivariate jet at alpha={alpha}"
            )
    n_values = tuple(range(1, w.n_max + 1))
    log_lower = np.empty(w.n_max)
    log_simplified = np.empty(w.n_max)
    for n in n_values:
        j, k = w.j_seq[n - 1], w.k_seq[n - 1]
        log_lower[n - 1] = (
            f.log_partial((j, k))
            - k * math.log(rho1)
            - log_factorial(k)
            - log_factorial(j)
            - float(L[k])
            - float(L[j])
            - j * math.log(n)
        )
        log_simplified[n - 1] = k * (math.log(n) - math.log(rho1))
    c_rho = {}
    for r in c_rhos:
        terms = np.array([
            math.exp(w.j_seq[n - 1] * (math.log(r) - math.log(n))) for n in n_values
        ])
        c_rho[float(r)] = np.cumsum(terms)
    return DivergenceTrace(
        rho1=float(rho1),
        n_values=n_values,
        log_lower=log_lower,
        log_lower_running=np.maximum.accumulate(log_lower),
        log_simplified=log_simplified,
        c_rho=c_rho,
    )


def moderate_growth_split(
    M: WeightSequence,
    sigma: float,
    jmax: int | None = None,
    kmax: int | None = None,
) -> CheckResult:
    """M_{j+k} <= sigma^{j+k} M_j M_k over the horizon grid.

    This is the splitting step that powers the exponential law; it holds by
    construction when sigma is the horizon max of the moderate-growth
    estimate.  Optional caps restrict the scanned (j, k) ranges; the first
    witness is reported in (j+k, j) order.
    """
    if sigma <= 0:
        raise ParameterRangeError("sigma must be positive")
    K = M.horizon
    L = M.logM
    jcap = K if jmax is None else min(jmax, K)
    kcap = K if kmax is None else min(kmax, K)
    log_sigma = math.log(sigma)
    for s in range(2, K + 1):
        for j in range(max(1, s - kcap), min(jcap, s - 1) + 1):
            k = s - j
            if not leq_log(float(L[s]), s * log_sigma + float(L[j]) + float(L[k])):
                return CheckResult(False, witness=(j, k), detail={
                    "lhs_log": float(L[s]),
                    "rhs_log": s * log_sigma + float(L[j]) + float(L[k]),
                })
    return CheckResult(True)
