"""Finite-horizon trend diagnostics for sups and series.

Convergence of a series, or boundedness of a sequence, is undecidable from
finitely many terms.  These rules are the package's documented extrapolation
contract:

* series: fit the last ceil(n/4) summands to c * k^(-p) by least squares on
  log-log scale; declare divergence for p <= 1 + eps, convergence for
  p >= 1 + 3*eps (eps = 0.05), otherwise inconclusive at the horizon.
* sup: declare bounded when the last ceil(n/4) values are non-increasing,
  unbounded when the log-log slope of that tail is >= eps, otherwise
  inconclusive.

Closed-form facts about the built-in sequence families override these
heuristics at the call sites; the fits are still reported as evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

EPSILON = 0.05


class Trend(str, Enum):
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"
    INCONCLUSIVE = "inconclusive"


class SeriesTrend(str, Enum):
    DIVERGES = "diverges"
    CONVERGES = "converges"
    INCONCLUSIVE = "inconclusive"


def tail_window(n: int) -> int:
    return min(n, max(3, math.ceil(n / 4)))


def _nonincreasing(tail: np.ndarray) -> bool:
    scale = float(np.max(np.abs(tail))) if len(tail) else 1.0
    tol = max(1e-12, 1e-9 * scale)
    return bool(np.all(np.diff(tail) <= tol))


def _lsq_slope(xs: np.ndarray, ys: np.ndarray) -> float:
    x = xs - xs.mean()
    denom = float(np.dot(x, x))
    if denom == 0.0:
        return 0.0
    return float(np.dot(x, ys - ys.mean()) / denom)


@dataclass(frozen=True)
class SupDiagnostics:
    trend: Trend
    sup: float           # max over the whole horizon (same scale as input)
    at: int              # index k achieving the max
    slope: float | None  # log-log tail slope when fitted
    window: int

    def to_dict(self) -> dict:
        return {
            "trend": self.trend.value,
            "sup": self.sup if math.isfinite(self.sup) else None,
            "at": self.at,
            "slope": self.slope,
            "window": self.window,
        }


def sup_trend(ks, values=None, log_values=None) -> SupDiagnostics:
    """Boundedness diagnosis of a sequence indexed by ``ks``.

    Pass either ``values`` (linear scale, any sign) or ``log_values``
    (natural logs of a positive sequence; -inf entries are skipped in fits).
    """
    if (values is None) == (log_values is None):
        raise ValueError("pass exactly one of values / log_values")
    ks = np.asarray(list(ks), dtype=float)
    seq = np.asarray(values if values is not None else log_values, dtype=float)
    if len(seq) != len(ks) or len(seq) == 0:
        raise ValueError("ks and sequence must be non-empty and aligned")

    finite = np.isfinite(seq)
    if not finite.any():
        return SupDiagnostics(Trend.BOUNDED, -math.inf, int(ks[0]), None, 0)
    i_max = int(np.flatnonzero(finite)[np.argmax(seq[finite])])
    sup = float(seq[i_max])
    at = int(ks[i_max])

    w = tail_window(len(seq))
    tail = seq[-w:]
    tail_ks = ks[-w:]
    if _nonincreasing(tail[np.isfinite(tail)]):
        return SupDiagnostics(Trend.BOUNDED, sup, at, None, w)

    if values is not None:
        ok = tail > 0
        if ok.sum() < 3:
            return SupDiagnostics(Trend.INCONCLUSIVE, sup, at, None, w)
        ys = np.log(tail[ok])
        xs = np.log(tail_ks[ok])
    else:
        ok = np.isfinite(tail)
        if ok.sum() < 3:
            return SupDiagnostics(Trend.INCONCLUSIVE, sup, at, None, w)
        ys = tail[ok]
        xs = np.log(tail_ks[ok])
    slope = _lsq_slope(xs, ys)
    trend = Trend.UNBOUNDED if slope >= EPSILON else Trend.INCONCLUSIVE
    return SupDiagnostics(trend, sup, at, slope, w)


@dataclass(frozen=True)
class SeriesDiagnostics:
    trend: SeriesTrend
    decay_exponent: float | None  # fitted p in summand ~ c * k^(-p)
    log_scale: float | None       # fitted ln c
    window: int

    def to_dict(self) -> dict:
        return {
            "trend": self.trend.value,
            "decay_exponent": self.decay_exponent,
            "log_scale": self.log_scale,
            "window": self.window,
        }


def series_trend(ks, log_summands) -> SeriesDiagnostics:
    """Divergence diagnosis for a positive-term series from its log-summands."""
    ks = np.asarray(list(ks), dtype=float)
    u = np.asarray(log_summands, dtype=float)
    if len(u) != len(ks) or len(u) == 0:
        raise ValueError("ks and log_summands must be non-empty and aligned")
    w = tail_window(len(u))
    tail_u = u[-w:]
    tail_k = ks[-w:]
    ok = np.isfinite(tail_u) & (tail_k > 0)
    if ok.sum() < 3:
        return SeriesDiagnostics(SeriesTrend.INCONCLUSIVE, None, None, w)
    xs = np.log(tail_k[ok])
    ys = tail_u[ok]
    slope = _lsq_slope(xs, ys)
    p = -slope
    log_c = float(ys.mean() + p * xs.mean())
    if p <= 1.0 + EPSILON:
        trend = SeriesTrend.DIVERGES
    elif p >= 1.0 + 3.0 * EPSILON:
        trend = SeriesTrend.CONVERGES
    else:
        trend = SeriesTrend.INCONCLUSIVE
    return SeriesDiagnostics(trend, p, log_c, w)


def power_law_tail_integral(log_c: float, p: float, k0: float) -> float:
    """Upper estimate of sum_{k >= k0} c * k^(-p) by the integral; inf if p <= 1."""
    if p <= 1.0:
        return math.inf
    try:
        return math.exp(log_c) * k0 ** (1.0 - p) / (p - 1.0)
    except OverflowError:
        return math.inf
