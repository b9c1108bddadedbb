"""Weight sequences M = (M_k) and their sequence-level classification.

A weight sequence is an increasing sequence of positive reals with M_0 = 1;
it controls a Denjoy-Carleman class C^M of smooth functions through the bound
|f^(k)| <= C rho^k k! M_k.  Everything here lives in natural-log space
(logM[k] = ln M_k) on a finite horizon k = 0..K; factorials go through
log-gamma so no family overflows.

Built-in families:

* gevrey(delta):    M_k = (k!)^delta
* qgevrey(q):       M_k = q^(k^2)
* logtype(delta):   M_k = (log(k+e))^(delta*k)
* constant:         M_k = 1           (the real-analytic class)
* custom:           logM supplied directly

Classification verdicts for built-in families come from closed-form facts;
custom sequences get the horizon-trend heuristics of :mod:`carleman.tails`
and always carry the inconclusive-at-horizon option.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from . import tails
from .enumeration import compositions
from .errors import (
    ConsistencyError,
    HorizonError,
    ParameterRangeError,
    PreconditionError,
)
from .logspace import log_factorial
from .reporting import CheckResult, Verdict, VerdictWithEvidence, jsonable

TOL_REL = 1e-9
TOL_ABS = 1e-12

FAMILIES = ("gevrey", "qgevrey", "logtype", "constant", "custom")

_TREND_TO_VERDICT = {
    tails.Trend.BOUNDED: Verdict.YES,
    tails.Trend.UNBOUNDED: Verdict.NO,
    tails.Trend.INCONCLUSIVE: Verdict.INCONCLUSIVE,
}

_SERIES_TO_VERDICT = {
    tails.SeriesTrend.DIVERGES: Verdict.YES,
    tails.SeriesTrend.CONVERGES: Verdict.NO,
    tails.SeriesTrend.INCONCLUSIVE: Verdict.INCONCLUSIVE,
}


def leq_log(a: float, b: float) -> bool:
    """a <= b in log space, within the package tolerance."""
    return a <= b + max(TOL_ABS, TOL_REL * max(abs(a), abs(b)))


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Finite-horizon log-space representation of a weight sequence.

    ``logM[k] = ln M_k`` for k = 0..horizon.  Invariants: logM[0] == 0
    (unless the sequence is a shifted comparison operand), entries finite
    and non-decreasing.
    """

    logM: np.ndarray
    family: str
    param: float | None
    horizon: int
    shifted: bool = False

    def __post_init__(self):
        arr = np.asarray(self.logM, dtype=float).copy()
        if arr.ndim != 1 or len(arr) != self.horizon + 1:
            raise ParameterRangeError(
                f"logM must have horizon+1 = {self.horizon + 1} entries, got {arr.shape}"
            )
        if self.horizon < 1:
            raise ParameterRangeError("horizon must be >= 1")
        if not np.all(np.isfinite(arr)):
            raise ParameterRangeError("logM entries must be finite")
        if not self.shifted:
            if abs(arr[0]) > TOL_ABS:
                raise ParameterRangeError(
                    f"logM[0] must be 0 (M_0 = 1), got {arr[0]!r}"
                )
            arr[0] = 0.0
        if np.any(np.diff(arr) < -TOL_ABS):
            k = int(np.flatnonzero(np.diff(arr) < -TOL_ABS)[0])
            raise ParameterRangeError(f"sequence must be increasing; drops at k={k + 1}")
        if self.family not in FAMILIES:
            raise ParameterRangeError(f"unknown family {self.family!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "logM", arr)

    @property
    def K(self) -> int:
        return self.horizon

    def to_spec(self) -> dict:
        spec: dict[str, Any] = {"family": self.family, "horizon": self.horizon}
        if self.family in ("gevrey", "logtype"):
            spec["delta"] = self.param
        elif self.family == "qgevrey":
            spec["q"] = self.param
        elif self.family == "custom":
            spec["logM"] = [float(x) for x in self.logM]
        if self.shifted:
            spec["shifted"] = True
        return spec

    def label(self) -> str:
        if self.param is None:
            return self.family
        return f"{self.family}({self.param:g})"


def make_sequence(
    family: str,
    horizon: int,
    *,
    delta: float | None = None,
    q: float | None = None,
    logM=None,
) -> WeightSequence:
    """Construct a built-in family (or a custom sequence) at the given horizon."""
    if horizon < 8:
        raise ParameterRangeError(f"horizon must be >= 8, got {horizon}")
    k = np.arange(horizon + 1, dtype=float)
    if family == "gevrey":
        if delta is None or delta <= 0:
            raise ParameterRangeError("gevrey requires delta > 0")
        vals = delta * np.array([log_factorial(int(i)) for i in range(horizon + 1)])
        return WeightSequence(vals, "gevrey", float(delta), horizon)
    if family == "qgevrey":
        if q is None or q <= 1:
            raise ParameterRangeError("qgevrey requires q > 1")
        vals = (k ** 2) * math.log(q)
        return WeightSequence(vals, "qgevrey", float(q), horizon)
    if family == "logtype":
        if delta is None or delta <= 0:
            raise ParameterRangeError("logtype requires delta > 0")
        vals = delta * k * np.log(np.log(k + math.e))
        return WeightSequence(vals, "logtype", float(delta), horizon)
    if family == "constant":
        return WeightSequence(np.zeros(horizon + 1), "constant", None, horizon)
    if family == "custom":
        if logM is None:
            raise ParameterRangeError("custom requires an explicit logM array")
        return WeightSequence(np.asarray(logM, dtype=float), "custom", None, horizon)
    raise ParameterRangeError(f"unknown family {family!r}")


def sequence_from_spec(spec: dict) -> WeightSequence:
    """Build a sequence from the JSON spec-file schema."""
    family = spec["family"]
    horizon = int(spec["horizon"])
    return make_sequence(
        family,
        horizon,
        delta=spec.get("delta"),
        q=spec.get("q"),
        logM=spec.get("logM"),
    )


def _require_standard(M: WeightSequence, op: str) -> None:
    if M.shifted:
        raise PreconditionError(f"{op} requires a standard (M_0 = 1) sequence")


# ---------------------------------------------------------------------------
# elementary sequence checks
# ---------------------------------------------------------------------------

def is_log_convex(M: WeightSequence) -> CheckResult:
    """M_k^2 <= M_{k-1} M_{k+1} for 1 <= k <= K-1, in log space."""
    L = M.logM
    for k in range(1, M.horizon):
        if not leq_log(2.0 * L[k], L[k - 1] + L[k + 1]):
            return CheckResult(False, witness=k, detail={
                "lhs_log": 2.0 * L[k], "rhs_log": L[k - 1] + L[k + 1]})
    return CheckResult(True)


def check_superadditivity(M: WeightSequence) -> CheckResult:
    """M_l M_k <= M_{l+k} for all l + k <= K; first witness in (l, k) order."""
    L = M.logM
    for l in range(0, M.horizon + 1):
        for k in range(l, M.horizon - l + 1):
            if not leq_log(L[l] + L[k], L[l + k]):
                return CheckResult(False, witness=(l, k), detail={
                    "lhs_log": L[l] + L[k], "rhs_log": L[l + k]})
    return CheckResult(True)


def check_composition_inequality(M: WeightSequence, kmax: int) -> CheckResult:
    """M_1^k M_k >= M_j M_{a_1} ... M_{a_j} over all compositions a of k <= kmax.

    Exhaustive over the 2^(k-1) ordered compositions per k; guaranteed for
    log-convex sequences with M_0 = 1, reported honestly for anything else.
    """
    if kmax > M.horizon:
        raise HorizonError(f"kmax {kmax} exceeds horizon {M.horizon}")
    if kmax > 16:
        raise ParameterRangeError("kmax is capped at 16 (2^(k-1) compositions)")
    L = M.logM
    checked = 0
    for k in range(1, kmax + 1):
        lhs = k * L[1] + L[k]
        for alpha in compositions(k):
            j = len(alpha)
            rhs = L[j] + sum(L[a] for a in alpha)
            checked += 1
            if not leq_log(rhs, lhs):
                return CheckResult(False, witness=(k, alpha), detail={
                    "lhs_log": lhs, "rhs_log": rhs})
    return CheckResult(True, detail={"compositions_checked": checked})


def shift(M: WeightSequence) -> WeightSequence:
    """The shifted comparison operand (M_{k+1})_k, horizon K-1.

    The result has M_0 = M_1 of the input, so it is flagged ``shifted`` and
    exempt from the M_0 = 1 invariant; it only enters inclusion comparisons.
    """
    if M.horizon < 2:
        raise HorizonError("shift requires horizon >= 2")
    return WeightSequence(M.logM[1:].copy(), "custom", None, M.horizon - 1, shifted=True)


def normalize(M: WeightSequence) -> WeightSequence:
    """M'_k = M_k / (M_0 M_1^k); M'_0 = 1 and M' >= 1 for log-convex input."""
    _require_standard(M, "normalize")
    if M.logM[1] == 0.0:
        return replace(M)
    k = np.arange(M.horizon + 1, dtype=float)
    vals = M.logM - k * M.logM[1]
    return WeightSequence(vals, "custom", None, M.horizon)


# ---------------------------------------------------------------------------
# growth estimates with closed-form overrides for built-in families
# ---------------------------------------------------------------------------

def _closed_form(M: WeightSequence, prop: str) -> Verdict | None:
    """Known verdicts for built-in families; None -> use the trend heuristic.

    gevrey is strongly regular for every delta > 0; qgevrey is derivation
    closed and strongly non-quasianalytic but fails moderate growth; logtype
    has moderate growth for every delta and is quasianalytic exactly for
    delta <= 1 (and not strongly non-quasianalytic for delta > 1).
    """
    fam, p = M.family, M.param
    if M.shifted or fam == "custom":
        return None
    table = {
        "gevrey": {
            "derivation_closed": Verdict.YES,
            "moderate_growth": Verdict.YES,
            "quasianalytic": Verdict.NO,
            "strongly_nonqa": Verdict.YES,
            "equals_comega": Verdict.NO,
        },
        "qgevrey": {
            "derivation_closed": Verdict.YES,
            "moderate_growth": Verdict.NO,
            "quasianalytic": Verdict.NO,
            "strongly_nonqa": Verdict.YES,
            "equals_comega": Verdict.NO,
        },
        "constant": {
            "derivation_closed": Verdict.YES,
            "moderate_growth": Verdict.YES,
            "quasianalytic": Verdict.YES,
            "strongly_nonqa": Verdict.NO,
            "equals_comega": Verdict.YES,
        },
    }
    if fam in table:
        return table[fam][prop]
    if fam == "logtype":
        qa = Verdict.YES if p <= 1.0 else Verdict.NO
        return {
            "derivation_closed": Verdict.YES,
            "moderate_growth": Verdict.YES,
            "quasianalytic": qa,
            "strongly_nonqa": Verdict.NO,
            "equals_comega": Verdict.NO,
        }[prop]
    return None


def _resolve(M: WeightSequence, prop: str, heuristic: Verdict, evidence: dict) -> VerdictWithEvidence:
    closed = _closed_form(M, prop)
    if closed is not None:
        evidence = dict(evidence)
        evidence["source"] = "closed_form"
        evidence["heuristic_verdict"] = heuristic.value
        return VerdictWithEvidence(closed, evidence)
    evidence = dict(evidence)
    evidence["source"] = "trend_heuristic"
    return VerdictWithEvidence(heuristic, evidence)


def derivation_closed_estimate(M: WeightSequence) -> VerdictWithEvidence:
    """Boundedness of (M_{k+1}/M_k)^(1/k); the derivation-closure criterion."""
    L = M.logM
    K = M.horizon
    ks = np.arange(1, K, dtype=float)
    s = (L[2:] - L[1:K]) / ks  # s_k = ln (M_{k+1}/M_k)^(1/k)
    diag = tails.sup_trend(ks, values=s)
    evidence = {
        "log_sup_rate": diag.sup,
        "sup_rate": math.exp(diag.sup) if diag.sup < 700 else None,
        "at_k": diag.at,
        "trend": diag.trend.value,
        "slope": diag.slope,
        "rate_tail": [float(x) for x in s[-diag.window:]],
    }
    return _resolve(M, "derivation_closed", _TREND_TO_VERDICT[diag.trend], evidence)


def moderate_growth_estimate(M: WeightSequence) -> VerdictWithEvidence:
    """Boundedness of (M_{j+k}/(M_j M_k))^(1/(j+k)); sigma is the horizon max."""
    L = M.logM
    K = M.horizon
    log_sigma = -math.inf
    arg = (1, 1)
    for j in range(1, K):
        ks = np.arange(1, K - j + 1)
        g = (L[j + ks] - L[j] - L[ks]) / (j + ks)
        i = int(np.argmax(g))
        if g[i] > log_sigma:
            log_sigma = float(g[i])
            arg = (j, int(ks[i]))
    kd = np.arange(1, K // 2 + 1)
    diag_vals = (L[2 * kd] - 2.0 * L[kd]) / (2.0 * kd)
    diag = tails.sup_trend(kd, values=diag_vals)
    evidence = {
        "log_sigma": log_sigma,
        "sigma": math.exp(log_sigma) if log_sigma < 700 else None,
        "at": list(arg),
        "trend": diag.trend.value,
        "slope": diag.slope,
        "diagonal_tail": [float(x) for x in diag_vals[-diag.window:]],
    }
    return _resolve(M, "moderate_growth", _TREND_TO_VERDICT[diag.trend], evidence)


def _growth_order_key(M: WeightSequence) -> tuple | None:
    """Total order on built-in families by asymptotic size of log M_k."""
    if M.shifted or M.family == "custom":
        return None
    rank = {"constant": 0, "logtype": 1, "gevrey": 2, "qgevrey": 3}[M.family]
    return (rank, M.param if M.param is not None else 0.0)


def inclusion_estimate(M: WeightSequence, N: WeightSequence) -> VerdictWithEvidence:
    """Boundedness of (M_k/N_k)^(1/k); yes means C^M is contained in C^N."""
    K = min(M.horizon, N.horizon)
    ks = np.arange(1, K + 1, dtype=float)
    u = (M.logM[1:K + 1] - N.logM[1:K + 1]) / ks
    diag = tails.sup_trend(ks, values=u)
    evidence = {
        "log_sup_ratio": diag.sup,
        "at_k": diag.at,
        "trend": diag.trend.value,
        "slope": diag.slope,
        "horizon": K,
    }
    key_m, key_n = _growth_order_key(M), _growth_order_key(N)
    if key_m is not None and key_n is not None:
        verdict = Verdict.YES if key_m <= key_n else Verdict.NO
        evidence["source"] = "closed_form"
        evidence["heuristic_verdict"] = _TREND_TO_VERDICT[diag.trend].value
        return VerdictWithEvidence(verdict, evidence)
    evidence["source"] = "trend_heuristic"
    return VerdictWithEvidence(_TREND_TO_VERDICT[diag.trend], evidence)


# ---------------------------------------------------------------------------
# minorants
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MinorantPair:
    """Increasing minorant of (k! M_k)^(1/k) and log-convex minorant of k! M_k.

    Stored in log space: ``m_log[k] = ln m_k`` and ``mstar_log[k] = ln M*_k``
    for k = 1..K; index 0 is padding (m_log[0] = m_log[1], mstar_log[0] = 0).
    Both are horizon truncations of infima over an infinite index range; for
    log-convex sequences the truncation is exact (the minimand is monotone).
    """

    m_log: np.ndarray
    mstar_log: np.ndarray
    horizon: int

    def __post_init__(self):
        for name in ("m_log", "mstar_log"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            if len(arr) != self.horizon + 1:
                raise ParameterRangeError(f"{name} must have horizon+1 entries")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(np.diff(self.m_log) < -TOL_ABS):
            raise ConsistencyError("increasing minorant is not non-decreasing")
        d2 = np.diff(self.mstar_log, 2)
        if len(d2) and float(np.min(d2)) < -1e-9:
            raise ConsistencyError("log-convex minorant has a concave kink")

    def m(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.m_log)

    def mstar(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.mstar_log)

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "m_log": [float(x) for x in self.m_log],
            "mstar_log": [float(x) for x in self.mstar_log],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MinorantPair":
        return cls(
            m_log=np.asarray(d["m_log"], dtype=float),
            mstar_log=np.asarray(d["mstar_log"], dtype=float),
            horizon=int(d["horizon"]),
        )


def _lower_envelope(F: np.ndarray) -> np.ndarray:
    """Lower convex envelope of the points (k, F_k) evaluated at the integers."""
    n = len(F)
    hull: list[int] = []
    for i in range(n):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            cross = (i1 - i0) * (F[i] - F[i0]) - (F[i1] - F[i0]) * (i - i0)
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    out = np.empty(n)
    xs = np.asarray(hull)
    for seg in range(len(hull) - 1):
        a, b = hull[seg], hull[seg + 1]
        ks = np.arange(a, b + 1)
        out[a:b + 1] = F[a] + (F[b] - F[a]) * (ks - a) / (b - a)
    out[hull[-1]] = F[hull[-1]]
    if len(hull) == 1:
        out[:] = F[hull[0]]
    return out


def _mstar_direct(F: np.ndarray) -> np.ndarray:
    """Chord-infimum route: min over j <= k <= l, j < l of the interpolant.

    For each k the whole (j, l) rectangle is evaluated at once; the j = k or
    l = k edges reproduce the data point F_k itself.
    """
    K = len(F) - 1
    out = np.empty(K + 1)
    out[0] = F[0]
    for k in range(1, K + 1):
        js = np.arange(0, k + 1, dtype=float)
        ls = np.arange(k, K + 1, dtype=float)
        den = ls[None, :] - js[:, None]
        num = F[: k + 1, None] * (ls[None, :] - k) + F[None, k:] * (k - js[:, None])
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = num / den
        vals[den <= 0] = np.inf  # only the degenerate j = l = k corner
        out[k] = min(float(F[k]), float(vals.min()))
    return out


def minorants(M: WeightSequence) -> MinorantPair:
    """Both minorants over 1..K, with the two M* routes cross-checked.

    The direct chord-infimum and the monotone-chain convex hull must agree
    within 1e-9 relative in log space or a ConsistencyError is raised.
    """
    _require_standard(M, "minorants")
    if M.horizon < 8:
        raise HorizonError("minorants requires horizon >= 8")
    K = M.horizon
    lf = np.array([log_factorial(k) for k in range(K + 1)])
    F = lf + M.logM

    h = F[1:] / np.arange(1, K + 1, dtype=float)
    m_log = np.empty(K + 1)
    m_log[K] = h[K - 1]
    for k in range(K - 1, 0, -1):
        m_log[k] = min(h[k - 1], m_log[k + 1])
    m_log[0] = m_log[1]

    env = _lower_envelope(F)
    direct = _mstar_direct(F)
    scale = np.maximum(np.abs(env), np.abs(direct))
    gap = np.abs(env - direct)
    bad = gap > np.maximum(TOL_ABS, TOL_REL * scale)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise ConsistencyError(
            f"log-convex minorant routes disagree at k={k}: "
            f"hull={env[k]!r} direct={direct[k]!r}"
        )
    if np.any(direct > F + np.maximum(TOL_ABS, TOL_REL * np.abs(F))):
        raise ConsistencyError("minorant exceeds k! M_k somewhere")
    return MinorantPair(m_log=m_log, mstar_log=direct, horizon=K)


# ---------------------------------------------------------------------------
# quasianalyticity
# ---------------------------------------------------------------------------

def _qa_series(M: WeightSequence, pair: MinorantPair):
    """Log-summands of the four equivalent quasianalyticity series."""
    L = M.logM
    K = M.horizon
    k01 = np.arange(0, K, dtype=float)
    t1 = L[:-1] - L[1:] - np.log(k01 + 1.0)            # M_k/((k+1) M_{k+1})
    k1 = np.arange(1, K + 1, dtype=float)
    s2 = -pair.m_log[1:]                                # 1/m_k
    s3 = -pair.mstar_log[1:] / k1                       # (1/M*_k)^(1/k)
    s4 = pair.mstar_log[:-1] - pair.mstar_log[1:]       # M*_k/M*_{k+1}
    return {
        "ratio": (k01, t1),
        "root_minorant": (k1, s2),
        "root_star": (k1, s3),
        "star_ratio": (k01, s4),
    }


def quasianalytic_verdict(M: WeightSequence) -> VerdictWithEvidence:
    """Divergence of sum M_k/((k+1) M_{k+1}) and its three equivalent forms.

    All four partial-sum traces are computed and their tail decay exponents
    fitted; a heuristic verdict is only accepted when the four agree,
    otherwise it is downgraded to inconclusive.  Built-in families use the
    closed-form answer instead and keep the traces as evidence.
    """
    _require_standard(M, "quasianalytic_verdict")
    pair = minorants(M)
    series = _qa_series(M, pair)
    per = {}
    verdicts = []
    for name, (ks, logs) in series.items():
        diag = tails.series_trend(ks, logs)
        with np.errstate(over="ignore", under="ignore"):
            partial = np.cumsum(np.exp(logs))
        per[name] = {
            "decay_exponent": diag.decay_exponent,
            "trend": diag.trend.value,
            "partial_sum_tail": [float(x) for x in partial[-8:]],
            "log_summand_tail": [float(x) for x in logs[-8:]],
        }
        verdicts.append(_SERIES_TO_VERDICT[diag.trend])
    if all(v == Verdict.YES for v in verdicts):
        heuristic = Verdict.YES
    elif all(v == Verdict.NO for v in verdicts):
        heuristic = Verdict.NO
    else:
        heuristic = Verdict.INCONCLUSIVE
    evidence = {"series": per, "consistent": len(set(verdicts)) == 1}
    return _resolve(M, "quasianalytic", heuristic, evidence)


def strong_nonqa_verdict(
    M: WeightSequence, _qa: VerdictWithEvidence | None = None
) -> VerdictWithEvidence:
    """Tail-sum bound sum_{k>=j} M_k/((k+1)M_{k+1}) <= C M_j/M_{j+1}.

    Precondition: the class is non-quasianalytic (the tails must converge).
    The horizon tail is completed by the fitted power law's integral so C_j
    is not systematically underestimated.
    """
    qa = _qa if _qa is not None else quasianalytic_verdict(M)
    if qa.verdict is not Verdict.NO:
        raise PreconditionError(
            "strong non-quasianalyticity presumes convergent tails "
            f"(quasianalytic verdict: {qa.verdict.value})"
        )
    L = M.logM
    K = M.horizon
    ks = np.arange(0, K, dtype=float)
    t1 = L[:-1] - L[1:] - np.log(ks + 1.0)
    diag = tails.series_trend(ks, t1)
    if diag.decay_exponent is None:
        remainder = math.inf
    else:
        remainder = tails.power_law_tail_integral(diag.log_scale, diag.decay_exponent, float(K))
    with np.errstate(over="ignore", under="ignore"):
        summands = np.exp(t1)
    tail = np.cumsum(summands[::-1])[::-1] + remainder
    with np.errstate(divide="ignore"):
        c_log = np.log(tail) + (L[1:] - L[:-1])
    sup = tails.sup_trend(ks, log_values=c_log)
    evidence = {
        "log_C_sup": sup.sup,
        "C_sup": math.exp(sup.sup) if sup.sup < 700 else None,
        "at_j": sup.at,
        "trend": sup.trend.value,
        "tail_remainder": remainder if math.isfinite(remainder) else None,
        "decay_exponent": diag.decay_exponent,
        "C_tail": [float(x) for x in c_log[-sup.window:]],
    }
    return _resolve(M, "strongly_nonqa", _TREND_TO_VERDICT[sup.trend], evidence)


def equals_comega_estimate(M: WeightSequence) -> VerdictWithEvidence:
    """Boundedness of (M_k)^(1/k): does C^M collapse to the analytic class."""
    K = M.horizon
    ks = np.arange(1, K + 1, dtype=float)
    u = M.logM[1:] / ks
    diag = tails.sup_trend(ks, values=u)
    evidence = {
        "log_sup_root": diag.sup,
        "sup_root": math.exp(diag.sup) if diag.sup < 700 else None,
        "at_k": diag.at,
        "trend": diag.trend.value,
        "slope": diag.slope,
    }
    return _resolve(M, "equals_comega", _TREND_TO_VERDICT[diag.trend], evidence)


# ---------------------------------------------------------------------------
# the full classification report
# ---------------------------------------------------------------------------

_REPORT_FIELDS = (
    "log_convex",
    "derivation_closed",
    "moderate_growth",
    "quasianalytic",
    "strongly_nonqa",
    "equals_comega",
)


@dataclass(frozen=True)
class ClassReport:
    """Verdict vector for one weight sequence, with numeric evidence.

    Invariants: moderate growth yes forces derivation closed not-no, and
    quasianalytic / strongly non-quasianalytic are never both yes while the
    class is strictly larger than the analytic one.
    """

    family: str
    param: float | None
    horizon: int
    log_convex: VerdictWithEvidence
    derivation_closed: VerdictWithEvidence
    moderate_growth: VerdictWithEvidence
    quasianalytic: VerdictWithEvidence
    strongly_nonqa: VerdictWithEvidence
    equals_comega: VerdictWithEvidence

    def __post_init__(self):
        if self.moderate_growth.verdict is Verdict.YES and \
                self.derivation_closed.verdict is Verdict.NO:
            raise ConsistencyError("moderate growth implies derivation closed")
        if (self.quasianalytic.verdict is Verdict.YES
                and self.strongly_nonqa.verdict is Verdict.YES
                and self.equals_comega.verdict is Verdict.NO):
            raise ConsistencyError(
                "quasianalytic and strongly non-quasianalytic are exclusive"
            )

    def verdicts(self) -> dict[str, str]:
        return {name: getattr(self, name).verdict.value for name in _REPORT_FIELDS}

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "family": self.family,
            "param": jsonable(self.param),
            "horizon": self.horizon,
        }
        for name in _REPORT_FIELDS:
            out[name] = getattr(self, name).to_dict()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ClassReport":
        kwargs = {name: VerdictWithEvidence.from_dict(d[name]) for name in _REPORT_FIELDS}
        return cls(family=d["family"], param=d["param"], horizon=int(d["horizon"]), **kwargs)


def classify(M: WeightSequence) -> ClassReport:
    """Run every sequence-level checker and assemble the report."""
    _require_standard(M, "classify")
    lc = is_log_convex(M)
    log_convex = VerdictWithEvidence(
        Verdict.YES if lc.holds else Verdict.NO,
        {"fails_at": lc.witness} if not lc.holds else {},
    )
    derivation = derivation_closed_estimate(M)
    moderate = moderate_growth_estimate(M)
    # Horizon heuristics can contradict the moderate-growth implication on
    # custom input; reconcile to inconclusive rather than report a falsehood.
    if moderate.verdict is Verdict.YES and derivation.verdict is Verdict.NO:
        ev = dict(derivation.evidence)
        ev["reconciled"] = "moderate growth implies derivation closed"
        derivation = VerdictWithEvidence(Verdict.INCONCLUSIVE, ev)
    qa = quasianalytic_verdict(M)
    if qa.verdict is Verdict.NO:
        strong = strong_nonqa_verdict(M, _qa=qa)
    elif qa.verdict is Verdict.YES:
        strong = VerdictWithEvidence(
            Verdict.NO, {"source": "definition", "reason": "tails diverge"})
    else:
        strong = VerdictWithEvidence(
            Verdict.INCONCLUSIVE,
            {"source": "definition", "reason": "quasianalyticity unresolved"})
    return ClassReport(
        family=M.family,
        param=M.param,
        horizon=M.horizon,
        log_convex=log_convex,
        derivation_closed=derivation,
        moderate_growth=moderate,
        quasianalytic=qa,
        strongly_nonqa=strong,
        equals_comega=equals_comega_estimate(M),
    )
