"""Executable weight-sequence calculus for Denjoy-Carleman function classes."""

from .errors import (
    CarlemanError,
    ConsistencyError,
    ConstructionFailed,
    HorizonError,
    HorizonExhausted,
    HorizonTooShort,
    ParameterRangeError,
    PreconditionError,
)
from .logspace import SignedLog, log_binomial, log_factorial
from .reporting import CheckResult, Verdict, VerdictWithEvidence
from .weights import (
    ClassReport,
    MinorantPair,
    WeightSequence,
    check_composition_inequality,
    check_superadditivity,
    classify,
    derivation_closed_estimate,
    equals_comega_estimate,
    inclusion_estimate,
    is_log_convex,
    make_sequence,
    minorants,
    moderate_growth_estimate,
    normalize,
    quasianalytic_verdict,
    sequence_from_spec,
    shift,
    strong_nonqa_verdict,
)
from .jets import (
    CompositionBound,
    CounterexampleWitness,
    DivergenceTrace,
    GrowthFit,
    Jet,
    Jet2,
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
    jet_add,
    jet_antiderive,
    jet_compose,
    jet_derive,
    jet_from_fractions,
    jet_from_values,
    jet_mul,
    jet_substitute,
    make_decay_sequence,
    moderate_growth_split,
    polynomial_jet,
    zero_jet,
)
from .divdiff import (
    DDNormEstimate,
    GridAlpha,
    NodeTuple,
    SamplingPlan,
    dd_norm,
    delta,
    delta_by_weights,
    delta_confluent,
    delta_grid,
    delta_grid_direct,
    derivative_recursion_check,
    difference_weights,
    mean_value_check,
    newton_identity_check,
)
from .constructions import (
    ChainReport,
    CurveLemmaSchedule,
    build_schedule,
    companion_sequence,
    verify_chain,
)

__version__ = "0.1.0"
