import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carleman import (
    Jet,
    SignedLog,
    Verdict,
    antiderivative_bound_check,
    composition_count_check,
    composition_stability_bound,
    counterexample_divergence,
    decay_weighted_sup,
    exp_jet,
    extremal_jet,
    extremal_jet2,
    find_counterexample_witness,
    fit_growth,
    geometric_jet,
    identity_jet,
    inclusion_estimate,
    jet_add,
    jet_antiderive,
    jet_compose,
    jet_derive,
    jet_from_fractions,
    jet_from_values,
    jet_mul,
    jet_substitute,
    make_decay_sequence,
    make_sequence,
    moderate_growth_split,
    polynomial_jet,
    zero_jet,
)
from carleman.errors import HorizonExhausted, ParameterRangeError, PreconditionError
from carleman.jets import certificate_holds, check_decay, check_supermultiplicative


# ---------------------------------------------------------------------------
# oracle: truncated polynomial substitution with exact rationals
# ---------------------------------------------------------------------------

def poly_mul_trunc(a, b, K):
    out = [F(0)] * (K + 1)
    for i, ai in enumerate(a[: K + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: K + 1 - i]):
            out[i + j] += ai * bj
    return out


def substitute_oracle(outer, inner, K):
    """sum_j b_j (inner - inner_0)^j, truncated; plain power accumulation."""
    u = [F(0)] + list(inner[1: K + 1])
    power = [F(1)] + [F(0)] * K
    out = [F(0)] * (K + 1)
    for j in range(0, K + 1):
        if j > 0:
            power = poly_mul_trunc(power, u, K)
        bj = outer[j] if j < len(outer) else F(0)
        for i in range(K + 1):
            out[i] += bj * power[i]
    return out


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

def test_mul_difference_of_squares():
    f = jet_from_fractions(0.0, [F(1), F(1), F(0)])
    g = jet_from_fractions(0.0, [F(1), F(-1), F(0)])
    assert jet_mul(f, g).exact == (F(1), F(0), F(-1))


def test_add_zero_identity():
    f = jet_from_fractions(0.0, [F(3), F(1), F(2)])
    z = zero_jet(2)
    assert jet_add(f, z).exact == f.exact


def test_exp_squared_is_exp_of_two_t():
    sq = jet_mul(exp_jet(5), exp_jet(5))
    want = tuple(F(2) ** k / math.factorial(k) for k in range(6))
    assert sq.exact == want


def test_derive_shifts_coefficients():
    f = jet_from_fractions(0.0, [F(0), F(0), F(1)])  # t^2
    assert jet_derive(f).exact == (F(0), F(2))


def test_antiderive_roundtrip():
    f = jet_from_fractions(0.0, [F(3), F(-2), F(5), F(7)])
    back = jet_antiderive(jet_derive(f), F(3))
    assert back.exact[: f.K + 1] == f.exact


def test_derive_of_exp_is_exp():
    d = jet_derive(exp_jet(8))
    assert d.exact == exp_jet(7).exact


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6),
                min_size=4, max_size=4),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6),
                min_size=4, max_size=4))
def test_mul_commutes_and_matches_floats(a, b):
    fa = jet_from_fractions(0.0, a)
    fb = jet_from_fractions(0.0, b)
    left = jet_mul(fa, fb)
    right = jet_mul(fb, fa)
    assert left.exact == right.exact
    # float lane is derived from the exact lane, so the two stay in lock step
    for sl, fr in zip(left.coeffs, left.exact):
        assert sl.sign == (0 if fr == 0 else (1 if fr > 0 else -1))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=4),
                min_size=5, max_size=5),
       st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=4),
                min_size=5, max_size=5),
       st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=4),
                min_size=5, max_size=5))
def test_mul_associative(a, b, c):
    fa, fb, fc = (jet_from_fractions(0.0, x) for x in (a, b, c))
    assert jet_mul(jet_mul(fa, fb), fc).exact == jet_mul(fa, jet_mul(fb, fc)).exact


def test_mul_requires_same_base():
    with pytest.raises(PreconditionError):
        jet_mul(jet_from_values(0.0, [1.0]), jet_from_values(1.0, [1.0]))


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def test_compose_square_after_affine():
    outer = polynomial_jet([F(0), F(0), F(1)], order=2, base=1)  # y^2 at 1
    inner = jet_from_fractions(0.0, [F(1), F(1), F(0)])          # 1 + t
    assert jet_compose(outer, inner).exact == (F(1), F(2), F(1))


def test_compose_identity_law():
    inner = jet_from_fractions(0.0, [F(2), F(1), F(-3), F(5)])
    iden = identity_jet(F(2), 3)
    assert jet_compose(iden, inner).exact == inner.exact


def test_compose_exp_of_polynomial_matches_oracle():
    inner_coeffs = [F(0), F(1), F(1, 2), F(0), F(-1, 3), F(0), F(0), F(0), F(0)]
    inner = jet_from_fractions(0.0, inner_coeffs)
    outer = exp_jet(8)
    got = jet_compose(outer, inner)
    want = substitute_oracle(list(outer.exact), inner_coeffs, 8)
    assert list(got.exact) == want


def test_compose_base_mismatch_rejected():
    outer = exp_jet(4)  # expanded at 0
    inner = jet_from_fractions(0.0, [F(1), F(1), F(0), F(0), F(0)])
    with pytest.raises(PreconditionError):
        jet_compose(outer, inner)


def test_compose_enumeration_equals_substitution_randomised():
    rng = random.Random(7)

    def rand_frac():
        return F(rng.randint(-5, 5), rng.randint(1, 6))

    for _ in range(25):
        K = rng.randint(2, 8)
        inner = [rand_frac() for _ in range(K + 1)]
        outer = [rand_frac() for _ in range(K + 1)]
        cj = jet_from_fractions(0.0, inner)
        fj = Jet(float(inner[0]),
                 tuple(SignedLog.from_fraction(x) for x in outer),
                 exact=tuple(outer))
        assert jet_compose(fj, cj).exact == jet_substitute(fj, cj).exact


def test_compose_associativity_exact():
    rng = random.Random(11)

    def rand_frac():
        return F(rng.randint(-3, 3), rng.randint(1, 4))

    for _ in range(10):
        K = 6
        d = [rand_frac() for _ in range(K + 1)]
        c = [rand_frac() for _ in range(K + 1)]
        b = [rand_frac() for _ in range(K + 1)]
        dj = jet_from_fractions(0.0, d)
        cj = Jet(float(d[0]), tuple(SignedLog.from_fraction(x) for x in c),
                 exact=tuple(c))
        # value of c after d is c_0, so b sits at that point
        bj = Jet(float(c[0]), tuple(SignedLog.from_fraction(x) for x in b),
                 exact=tuple(b))
        left = jet_compose(jet_compose(bj, cj), dj)
        right = jet_compose(bj, jet_compose(cj, dj))
        assert left.exact == right.exact


def test_composition_counts():
    assert composition_count_check(1) == {1: 1}
    assert composition_count_check(4) == {1: 1, 2: 3, 3: 3, 4: 1}
    counts12 = composition_count_check(12)
    assert sum(counts12.values()) == 2048
    with pytest.raises(ParameterRangeError):
        composition_count_check(21)


# ---------------------------------------------------------------------------
# growth certificates
# ---------------------------------------------------------------------------

def test_fit_constant_ones():
    M = make_sequence("constant", 12)
    fit = fit_growth(jet_from_values(0.0, [1.0] * 13), M)
    assert fit.rho == pytest.approx(1.0)
    assert fit.C == pytest.approx(1.0)


def test_fit_extremal_is_unit(gevrey1):
    fit = fit_growth(extremal_jet(gevrey1), gevrey1)
    assert fit.rho == pytest.approx(1.0, abs=1e-12)
    assert fit.C == pytest.approx(1.0, abs=1e-12)


def test_fit_geometric():
    M = make_sequence("constant", 10)
    fit = fit_growth(geometric_jet(2, 10), M)
    assert fit.rho == pytest.approx(2.0, rel=1e-12)
    assert fit.C == pytest.approx(1.0, rel=1e-12)
    assert fit.achieved_at in range(1, 11)


def test_fit_zero_jet():
    M = make_sequence("constant", 8)
    fit = fit_growth(zero_jet(8), M)
    assert fit.rho == pytest.approx(1e-6)
    assert fit.C == 0.0


def test_certificate_always_holds_randomised(gevrey1):
    rng = random.Random(3)
    for _ in range(50):
        vals = [rng.uniform(-10, 10) * (10.0 ** rng.randint(-6, 6))
                for _ in range(17)]
        jet = jet_from_values(0.0, vals)
        fit = fit_growth(jet, make_sequence("gevrey", 16, delta=1.0))
        assert certificate_holds(jet, fit)


def test_extremal_against_smaller_class_has_growing_rate(gevrey1):
    # when C^M is not inside C^N the per-order rate grows with the horizon
    N64 = make_sequence("constant", 64)
    N128 = make_sequence("constant", 128)
    M64 = make_sequence("gevrey", 64, delta=1.0)
    assert inclusion_estimate(gevrey1, N128).verdict is Verdict.NO
    rho_small = fit_growth(extremal_jet(M64), N64).log_rho
    rho_large = fit_growth(extremal_jet(gevrey1), N128).log_rho
    assert rho_large > rho_small


def test_stability_bound_identity_case(gevrey1):
    M = make_sequence("gevrey", 10, delta=1.0)
    inner = jet_from_fractions(0.0, [F(0), F(1), F(1), F(0), F(2), F(0),
                                     F(0), F(1), F(0), F(0), F(0)])
    outer = identity_jet(F(0), 10)
    fitF = fit_growth(outer, M)
    fitC = fit_growth(inner, M)
    bound = composition_stability_bound(fitF, fitC, M)
    comp = jet_compose(outer, inner)
    logs = comp.coefficient_logs()
    assert np.all((logs <= bound.log_bound[: comp.K + 1] + 1e-9) | ~np.isfinite(logs))


def test_stability_bound_exp_case():
    M = make_sequence("constant", 10)
    inner = exp_jet(10)
    outer = exp_jet(10, at=1.0)
    fitF, fitC = fit_growth(outer, M), fit_growth(inner, M)
    bound = composition_stability_bound(fitF, fitC, M)
    comp = jet_compose(outer, inner)
    logs = comp.coefficient_logs()
    assert np.all(logs <= bound.log_bound + 1e-9)
    # the relaxed certificate dominates the per-order bound everywhere
    ks = np.arange(11)
    cert = bound.fit.log_C + ks * bound.fit.log_rho + M.logM
    assert np.all(bound.log_bound <= cert + 1e-9)


def test_stability_bound_needs_log_convex():
    K = 8
    logM = [0.0, math.log(2), math.log(3), math.log(10)] + [math.log(10)] * 5
    M = make_sequence("custom", K, logM=np.maximum.accumulate(logM))
    fit = fit_growth(jet_from_values(0.0, [1.0] * 9), M)
    with pytest.raises(PreconditionError):
        composition_stability_bound(fit, fit, M)


def test_binomial_sum_collapse():
    for k in range(1, 21):
        for rho in (0.5, 1.0, 3.0):
            total = sum(math.comb(k - 1, j - 1) * rho ** j for j in range(1, k + 1))
            closed = rho * (1 + rho) ** (k - 1)
            assert total == pytest.approx(closed, rel=1e-10)


# ---------------------------------------------------------------------------
# antiderivative bound
# ---------------------------------------------------------------------------

def test_antiderivative_bound_gevrey(gevrey1):
    res = antiderivative_bound_check(gevrey1, 1.0)
    assert res.holds
    # closed form: lhs = (k+1)^(-2) <= 1 = 1/M_1
    L = gevrey1.logM
    assert L[3] - L[4] - math.log(4) == pytest.approx(-2 * math.log(4), rel=1e-12)


def test_antiderivative_bound_constant(constant):
    assert antiderivative_bound_check(constant, 2.0).holds


def test_antiderivative_bound_custom_witness():
    # M = (1, 5, 5, ...): at k = 1, M_1/(2 M_2) = 1/2 > 1/5 = 1/M_1
    K = 8
    M = make_sequence("custom", K, logM=[0.0] + [math.log(5)] * K)
    res = antiderivative_bound_check(M, 1.0)
    assert not res.holds
    assert res.witness == 1


# ---------------------------------------------------------------------------
# rapidly decaying test sequences
# ---------------------------------------------------------------------------

def test_decay_sequences_are_supermultiplicative():
    for kind in ("inverse_factorial", "gaussian"):
        log_r = make_decay_sequence(kind, 48)
        assert check_supermultiplicative(log_r).holds
        assert check_decay(log_r).holds


def test_decay_weighted_sup_extremal(gevrey1):
    log_r = make_decay_sequence("inverse_factorial", gevrey1.horizon)
    v = decay_weighted_sup(extremal_jet(gevrey1), gevrey1, log_r)
    assert v.verdict is Verdict.YES
    assert v.evidence["sup"] == pytest.approx(1.0)
    assert v.evidence["at_k"] == 0


def test_decay_weighted_sup_detects_uncertified_growth(gevrey1):
    K = gevrey1.horizon
    ks = np.arange(K + 1, dtype=float)
    grow = ks * np.log(np.maximum(ks, 1.0))
    coeffs = tuple(SignedLog(1, float(gevrey1.logM[k] + grow[k])) for k in range(K + 1))
    jet = Jet(0.0, coeffs)
    log_r = make_decay_sequence("inverse_factorial", K)
    v = decay_weighted_sup(jet, gevrey1, log_r)
    assert v.verdict is Verdict.NO


# ---------------------------------------------------------------------------
# the counterexample engine
# ---------------------------------------------------------------------------

def test_witness_search_qgevrey(qgevrey2):
    w = find_counterexample_witness(qgevrey2, 10)
    # for q = 2 the ratio is q^(2jk/(j+k)); the diagonal (n, n) gives q^n >= n
    assert w.j_seq == tuple(range(1, 11))
    assert w.k_seq == tuple(range(1, 11))
    for n in range(1, 11):
        j, k = w.j_seq[n - 1], w.k_seq[n - 1]
        ratio = 2.0 ** (2 * j * k / (j + k))
        assert ratio >= n


def test_witness_requires_failed_moderate_growth(gevrey1):
    with pytest.raises(PreconditionError):
        find_counterexample_witness(gevrey1, 4)


def test_witness_horizon_exhausted():
    M = make_sequence("qgevrey", 8, q=2.0)
    with pytest.raises(HorizonExhausted) as err:
        find_counterexample_witness(M, 10)
    assert err.value.achieved_n >= 1


def test_divergence_trace_matches_closed_form(qgevrey2):
    w = find_counterexample_witness(qgevrey2, 12)
    f2 = extremal_jet2(qgevrey2, max(j + k for j, k in zip(w.j_seq, w.k_seq)))
    tr = counterexample_divergence(qgevrey2, w, 10.0, f2)
    # oracle: ln L_n = ln C(2n, n) + 2 n^2 ln 2 - n ln rho1 - n ln n
    for n in range(1, 13):
        want = (
            math.log(math.comb(2 * n, n))
            + 2 * n * n * math.log(2)
            - n * math.log(10.0)
            - n * math.log(n)
        )
        assert tr.log_lower[n - 1] == pytest.approx(want, rel=1e-9, abs=1e-9)
    # simplified bound (n/rho1)^(k_n)
    assert tr.log_simplified[11] == pytest.approx(12 * (math.log(12) - math.log(10)))
    # multinomial factor used in the chain is at least 1
    for n in range(1, 13):
        assert math.comb(w.j_seq[n - 1] + w.k_seq[n - 1], w.j_seq[n - 1]) >= 1


def test_divergence_c_rho_finite(qgevrey2):
    w = find_counterexample_witness(qgevrey2, 20)
    f2 = extremal_jet2(qgevrey2, 2 * 20)
    tr = counterexample_divergence(qgevrey2, w, 1.0, f2, c_rhos=(1.0, 2.0))
    partial = tr.c_rho[1.0]
    # comparison oracle: sum (1/n)^(j_n) <= 1 + sum n^(-2)
    bound = 1.0 + sum(n ** -2.0 for n in range(2, 21))
    assert partial[-1] <= bound
    # Cauchy tail for rho = 2
    steps = np.diff(tr.c_rho[2.0])
    assert np.all(steps[-5:] < 1e-12)


def test_divergence_rejects_wrong_payload(qgevrey2, gevrey1):
    w = find_counterexample_witness(qgevrey2, 6)
    wrong = extremal_jet2(gevrey1, 12)
    with pytest.raises(PreconditionError):
        counterexample_divergence(qgevrey2, w, 10.0, wrong)


def test_extremal_jet2_index_set(qgevrey2):
    f2 = extremal_jet2(qgevrey2, 5)
    assert set(f2.coeffs) == {(i, j) for i in range(6) for j in range(6 - i)}
    # d^(2,3) f = 5! M_5
    want = math.lgamma(6) + float(qgevrey2.logM[5])
    assert f2.log_partial((2, 3)) == pytest.approx(want, rel=1e-12)


# ---------------------------------------------------------------------------
# moderate growth splitting
# ---------------------------------------------------------------------------

def test_split_gevrey_with_sigma_two(gevrey1):
    assert moderate_growth_split(gevrey1, 2.0).holds


def test_split_constant_equality(constant):
    assert moderate_growth_split(constant, 1.0).holds


def test_split_from_estimate_holds():
    from carleman import moderate_growth_estimate

    for fam, kwargs in (("gevrey", {"delta": 2.0}), ("logtype", {"delta": 1.0})):
        M = make_sequence(fam, 64, **kwargs)
        sigma = math.exp(moderate_growth_estimate(M).evidence["log_sigma"])
        assert moderate_growth_split(M, sigma).holds


def test_split_qgevrey_fails_with_witness(qgevrey2):
    res = moderate_growth_split(qgevrey2, 2.0)
    assert not res.holds
    # first failing shell in (j+k, j) order: 2jk ln2 > (j+k) ln 2 at (1, 2)
    assert res.witness == (1, 2)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_jet_json_roundtrip_exact():
    jet = jet_from_fractions(0.5, [F(1, 3), F(-2, 7), F(0), F(5)])
    d = jet.to_dict()
    again = Jet.from_dict(d)
    assert again.exact == jet.exact
    assert again.base == jet.base


def test_jet_json_roundtrip_float():
    jet = jet_from_values(0.0, [1.0, -0.5, 0.0, 3.25])
    d = jet.to_dict()
    again = Jet.from_dict(d)
    assert [c.sign for c in again.coeffs] == [c.sign for c in jet.coeffs]
    for a, b in zip(again.coeffs, jet.coeffs):
        if a.sign != 0:
            assert a.log_mag == b.log_mag


def test_jet_lane_mismatch_rejected():
    with pytest.raises(ParameterRangeError):
        Jet(0.0, (SignedLog.from_float(2.0),), exact=(F(1),))
