"""Difference-quotient calculus on node grids.

The scaled divided difference used throughout is delta^k f = k! * [x_0..x_k]f,
computed from the classical recursive table (numerically the stabler route)
with the weight formula

    beta_i(x) = k! * prod_{j != i} 1/(x_i - x_j),    delta^k f = sum beta_i f(x_i)

kept as a cross-check path.  Multivariate delta^alpha acts per axis on grids
K^alpha; the norm of a Denjoy-Carleman class has an equivalent expression as
a sup of |delta^alpha f| / (rho^|alpha| |alpha|! M_|alpha|) over such grids,
and ``dd_norm`` samples that sup from below.

All functions accept exact rationals as well as floats; the table code is
type-generic so polynomial identities can be checked with zero tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as iter_product

import numpy as np

from .errors import ParameterRangeError, PreconditionError
from .reporting import CheckResult, jsonable
from .weights import WeightSequence
from .logspace import log_factorial

MIN_GAP_FACTOR = 1e-12
MAX_AXIS_ORDER = 14


def _nodes_of(t) -> tuple:
    if isinstance(t, NodeTuple):
        return t.nodes
    return tuple(t)


@dataclass(frozen=True)
class NodeTuple:
    """Nodes x_0..x_k, optionally with one node of multiplicity 2.

    Multiplicity-1 nodes must be pairwise distinct (gap above 1e-12 of the
    span); a single duplicated node carries a derivative sample through the
    confluent-limit path.
    """

    nodes: tuple
    multiplicity: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if len(self.nodes) == 0:
            raise ParameterRangeError("empty node tuple")
        if self.multiplicity is not None:
            mult = tuple(self.multiplicity)
            object.__setattr__(self, "multiplicity", mult)
            if len(mult) != len(self.nodes):
                raise ParameterRangeError("multiplicity length mismatch")
            if any(m not in (1, 2) for m in mult):
                raise ParameterRangeError("multiplicities must be 1 or 2")
            if sum(1 for m in mult if m == 2) > 1:
                raise ParameterRangeError("at most one node of multiplicity 2")
        xs = sorted(float(x) for x in self.nodes)
        span = max(xs[-1] - xs[0], 1.0) if len(xs) > 1 else 1.0
        gaps = [b - a for a, b in zip(xs, xs[1:])]
        if gaps and min(gaps) <= MIN_GAP_FACTOR * span:
            raise ParameterRangeError(
                "coincident nodes; use the explicit confluent path instead"
            )

    @property
    def order(self) -> int:
        return len(self.nodes) - 1

    def span(self) -> tuple[float, float]:
        xs = [float(x) for x in self.nodes]
        return min(xs), max(xs)


def difference_weights(t) -> list:
    """The k!-scaled interpolation weights beta_i; sum to 0 for k >= 1."""
    xs = _nodes_of(t)
    k = len(xs) - 1
    kfact = math.factorial(k)
    out = []
    for i, xi in enumerate(xs):
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            d = xi - xj
            if d == 0:
                raise ParameterRangeError("coincident nodes in weight formula")
            denom = denom * d
        out.append(kfact / denom)
    return out


def delta(values, t):
    """delta^k f = k! * [x_0..x_k]f via the recursive table (type-generic)."""
    xs = _nodes_of(t)
    vals = list(values)
    k = len(xs) - 1
    if len(vals) != k + 1:
        raise ParameterRangeError("samples must align with nodes")
    table = vals
    for c in range(1, k + 1):
        table = [
            (table[i + 1] - table[i]) / (xs[i + c] - xs[i])
            for i in range(k - c + 1)
        ]
    return table[0] * math.factorial(k)


def delta_by_weights(values, t):
    """Cross-check route: sum beta_i f(x_i)."""
    xs = _nodes_of(t)
    vals = list(values)
    beta = difference_weights(xs)
    acc = beta[0] * vals[0]
    for b, v in zip(beta[1:], vals[1:]):
        acc = acc + b * v
    return acc


def delta_confluent(values, t, derivative_value):
    """delta^k with exactly one duplicated node consuming a derivative sample.

    The duplicated node may appear anywhere; divided differences are
    symmetric, so nodes are sorted to make the pair adjacent and the
    first-order entry at the pair is replaced by f'(x) (the confluent limit).
    """
    xs = list(_nodes_of(t))
    vals = list(values)
    if len(xs) != len(vals):
        raise ParameterRangeError("samples must align with nodes")
    order = sorted(range(len(xs)), key=lambda i: float(xs[i]))
    z = [xs[i] for i in order]
    f = [vals[i] for i in order]
    dup = [i for i in range(len(z) - 1) if z[i + 1] == z[i]]
    if len(dup) != 1:
        raise ParameterRangeError("exactly one duplicated node is required")
    k = len(z) - 1
    table = f
    for c in range(1, k + 1):
        new = []
        for i in range(k - c + 1):
            if z[i + c] == z[i]:
                new.append(derivative_value)
            else:
                new.append((table[i + 1] - table[i]) / (z[i + c] - z[i]))
        table = new
    return table[0] * math.factorial(k)


# ---------------------------------------------------------------------------
# multivariate grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridAlpha:
    """Per-axis node tuples for delta^alpha on a compact box."""

    alpha: tuple[int, ...]
    per_axis: tuple[NodeTuple, ...]
    box: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
        object.__setattr__(self, "per_axis", tuple(self.per_axis))
        object.__setattr__(
            self, "box", tuple((float(a), float(b)) for a, b in self.box)
        )
        if not (1 <= len(self.alpha) <= 3):
            raise ParameterRangeError("1 to 3 axes supported")
        if len(self.per_axis) != len(self.alpha) or len(self.box) != len(self.alpha):
            raise ParameterRangeError("axis count mismatch")
        for a, t, (lo, hi) in zip(self.alpha, self.per_axis, self.box):
            if t.order != a:
                raise ParameterRangeError("axis tuple order must equal alpha_i")
            for x in t.nodes:
                fx = float(x)
                pad = 1e-12 * max(1.0, abs(lo), abs(hi))
                if not (lo - pad <= fx <= hi + pad):
                    raise ParameterRangeError("grid node outside the box")

    @property
    def total_order(self) -> int:
        return sum(self.alpha)

    def points(self):
        """Every grid combination, in odometer order."""
        axes = [t.nodes for t in self.per_axis]
        return iter_product(*axes)


def delta_grid(f, grid: GridAlpha):
    """Iterated per-axis application of delta; axis order is immaterial."""
    axes = [t.nodes for t in grid.per_axis]
    shape = tuple(len(a) for a in axes)
    tensor = np.empty(shape, dtype=float)
    for idx in iter_product(*(range(s) for s in shape)):
        point = tuple(axes[d][i] for d, i in enumerate(idx))
        tensor[idx] = f(*point)
    out = tensor
    for axis in range(len(axes) - 1, -1, -1):
        out = np.apply_along_axis(lambda v, ax=axis: delta(v, axes[ax]), axis, out)
    return float(out)


def delta_grid_direct(f, grid: GridAlpha):
    """Literal multi-sum with tensorised beta weights (cross-check route)."""
    axes = [t.nodes for t in grid.per_axis]
    betas = [difference_weights(a) for a in axes]
    total = 0.0
    for idx in iter_product(*(range(len(a)) for a in axes)):
        w = 1.0
        for d, i in enumerate(idx):
            w *= betas[d][i]
        point = tuple(axes[d][i] for d, i in enumerate(idx))
        total += w * f(*point)
    return total


# ---------------------------------------------------------------------------
# the divided-difference norm estimate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SamplingPlan:
    """Budget for the norm sup: grid orders, node variants, random tuples."""

    max_order: int = 8
    chebyshev_points: int = 3
    random_tuples: int = 8
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "max_order": self.max_order,
            "chebyshev_points": self.chebyshev_points,
            "random_tuples": self.random_tuples,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SamplingPlan":
        return cls(
            max_order=int(d["max_order"]),
            chebyshev_points=int(d["chebyshev_points"]),
            random_tuples=int(d["random_tuples"]),
            seed=int(d["seed"]),
        )


@dataclass(frozen=True)
class DDNormEstimate:
    """A documented lower bound on the difference-quotient norm."""

    rho: float
    value: float
    binding_alpha: tuple[int, ...]
    binding_nodes: tuple[tuple[float, ...], ...]
    samples_used: int

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "value": self.value,
            "binding_alpha": list(self.binding_alpha),
            "binding_nodes": jsonable(self.binding_nodes),
            "samples_used": self.samples_used,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DDNormEstimate":
        return cls(
            rho=float(d["rho"]),
            value=float(d["value"]),
            binding_alpha=tuple(d["binding_alpha"]),
            binding_nodes=tuple(tuple(x) for x in d["binding_nodes"]),
            samples_used=int(d["samples_used"]),
        )


def _lobatto(lo: float, hi: float, m: int) -> np.ndarray:
    """m Chebyshev extrema mapped to [lo, hi]; endpoints included for m >= 2."""
    if m == 1:
        return np.array([0.5 * (lo + hi)])
    i = np.arange(m)
    x = -np.cos(math.pi * i / (m - 1))
    return lo + (hi - lo) * (x + 1.0) / 2.0


def _spread_indices(m: int, take: int) -> list[int]:
    # m >= take, so consecutive rounded positions differ by at least 1.
    if take == 1:
        return [m // 2]
    return [round(i * (m - 1) / (take - 1)) for i in range(take)]


def _chebyshev_axis_tuple(lo: float, hi: float, order: int, variant: int) -> tuple:
    m = order + 1 + variant
    pts = _lobatto(lo, hi, m)
    return tuple(pts[i] for i in _spread_indices(m, order + 1))


def _random_axis_tuple(lo, hi, order, rng) -> tuple:
    span = hi - lo
    m = order + 1
    min_gap = span / (4.0 * m * m)
    for _ in range(100):
        xs = np.sort(rng.uniform(lo, hi, size=m))
        if m == 1 or np.min(np.diff(xs)) >= min_gap:
            return tuple(float(x) for x in xs)
    # Rejection exhausted: jitter a Lobatto grid deterministically instead.
    base = _lobatto(lo, hi, m)
    jitter = rng.uniform(-min_gap, min_gap, size=m) if m > 1 else np.zeros(1)
    xs = np.clip(np.sort(base + jitter), lo, hi)
    return tuple(float(x) for x in xs)


def _multi_indices(n_axes: int, max_order: int):
    rng_per_axis = range(min(max_order, MAX_AXIS_ORDER) + 1)
    for alpha in iter_product(*([rng_per_axis] * n_axes)):
        if sum(alpha) <= max_order:
            yield alpha


def dd_norm(
    f,
    box,
    rho: float,
    M: WeightSequence,
    plan: SamplingPlan | None = None,
) -> DDNormEstimate:
    """Sample sup |delta^alpha f| / (rho^|alpha| |alpha|! M_|alpha|) from below.

    Grids per order: nested Chebyshev-extrema tuples (near-extremal for
    divided differences) plus seed-keyed jittered random tuples with
    minimum-gap rejection, so enlarging any budget entry only ever adds
    sampled grids and the estimate is monotone in the budget.
    """
    plan = plan or SamplingPlan()
    if rho <= 0:
        raise ParameterRangeError("rho must be positive")
    box = tuple((float(a), float(b)) for a, b in box)
    n = len(box)
    if not (1 <= n <= 3):
        raise ParameterRangeError("1 to 3 axes supported")
    if plan.max_order > M.horizon:
        raise ParameterRangeError("plan order exceeds the sequence horizon")
    best = -math.inf
    binding = ((0,) * n, tuple((0.0,) for _ in range(n)))
    used = 0
    log_rho = math.log(rho)
    for alpha in _multi_indices(n, plan.max_order):
        s = sum(alpha)
        denom_log = s * log_rho + log_factorial(s) + float(M.logM[s])
        candidates = []
        for variant in range(max(1, plan.chebyshev_points)):
            candidates.append(
                tuple(
                    _chebyshev_axis_tuple(lo, hi, a, variant)
                    for (lo, hi), a in zip(box, alpha)
                )
            )
        for r in range(plan.random_tuples):
            axes = []
            for d, ((lo, hi), a) in enumerate(zip(box, alpha)):
                rng = np.random.default_rng(
                    np.random.SeedSequence([plan.seed, s, *alpha, d, r])
                )
                axes.append(_random_axis_tuple(lo, hi, a, rng))
            candidates.append(tuple(axes))
        for axes in candidates:
            grid = GridAlpha(
                alpha=alpha,
                per_axis=tuple(NodeTuple(a) for a in axes),
                box=box,
            )
            val = delta_grid(f, grid)
            used += 1
            ratio_log = math.log(abs(val)) - denom_log if val != 0 else -math.inf
            if ratio_log > best:
                best = ratio_log
                binding = (alpha, axes)
    value = math.exp(best) if best > -math.inf else 0.0
    return DDNormEstimate(
        rho=rho,
        value=value,
        binding_alpha=binding[0],
        binding_nodes=binding[1],
        samples_used=used,
    )


# ---------------------------------------------------------------------------
# structural identities behind the norm lemma
# ---------------------------------------------------------------------------

def mean_value_check(g, t, derivative_range, tol: float = 1e-7) -> CheckResult:
    """delta^j g must land in the range of g^(j) over the node hull.

    ``derivative_range`` is (lo, hi) for g^(j) on [min node, max node]; the
    comparison is widened by ``tol`` relative slack to absorb rounding on
    both the range and the table.
    """
    xs = _nodes_of(t)
    vals = [g(x) for x in xs]
    d = delta(vals, xs)
    lo, hi = derivative_range
    if lo > hi:
        raise PreconditionError("empty derivative range")
    pad = tol * max(1.0, abs(lo), abs(hi), abs(d))
    ok = (lo - pad) <= d <= (hi + pad)
    return CheckResult(ok, witness=None if ok else tuple(float(x) for x in xs),
                       detail={"delta": d, "range": [lo, hi]})


def newton_identity_check(g, t, rel_tol: float = 1e-9) -> CheckResult:
    """Reconstruct g at the last node from lower-order scaled differences.

    g(t_j) = sum_{i<=j} (1/i!) prod_{l<i} (t_j - t_l) * delta^i g(t_0..t_i),
    exact for any g since the interpolating polynomial agrees at its nodes.
    """
    xs = _nodes_of(t)
    vals = [g(x) for x in xs]
    j = len(xs) - 1
    acc = None
    for i in range(j + 1):
        coef = delta(vals[: i + 1], xs[: i + 1])
        prod = 1
        for l in range(i):
            prod = prod * (xs[j] - xs[l])
        term = prod * coef / math.factorial(i)
        acc = term if acc is None else acc + term
    target = vals[j]
    err = abs(acc - target)
    scale = max(1.0, abs(float(target)))
    ok = float(err) <= rel_tol * scale
    return CheckResult(ok, detail={"reconstructed": float(acc),
                                   "actual": float(target),
                                   "residual": float(err) / scale})


def derivative_recursion_check(g, gprime, t, rel_tol: float = 1e-8) -> CheckResult:
    """delta^j g' =  (1/(j+1)) sum_i delta^{j+1} g(t_0..t_j, t_i), confluent.

    The appended node duplicates t_i, so each right-hand term consumes one
    derivative sample g'(t_i) through the confluent limit.
    """
    xs = _nodes_of(t)
    j = len(xs) - 1
    lhs = delta([gprime(x) for x in xs], xs)
    vals = [g(x) for x in xs]
    total = 0.0
    for i in range(j + 1):
        ext_nodes = list(xs) + [xs[i]]
        ext_vals = vals + [vals[i]]
        total += delta_confluent(ext_vals, ext_nodes, gprime(xs[i]))
    rhs = total / (j + 1)
    scale = max(1.0, abs(lhs), abs(rhs))
    ok = abs(lhs - rhs) <= rel_tol * scale
    return CheckResult(ok, detail={"lhs": float(lhs), "rhs": float(rhs),
                                   "residual": abs(lhs - rhs) / scale})
