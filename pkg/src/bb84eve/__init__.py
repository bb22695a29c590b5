"""Eavesdropping attack calculus for BB84 with weak coherent pulses.

Closed-form guess probabilities, disturbances and privacy-amplification
thresholds for intercept-resend, optimal-probe, beam-splitter and
photon-number-splitting attacks, validated by a photon-level Monte Carlo of
the full protocol.
"""

from .engine import (
    SessionConfig,
    SessionStats,
    analytic_expectations,
    run_session,
    run_sharded,
    shard_rng,
)
from .pulse_attacks import (
    AttackPrediction,
    AttackStrategy,
    BsInterceptResend,
    BsOptimal,
    InterceptResend,
    KappaCalibration,
    OptimalIncoherent,
    Pns,
    bs_ir_predict,
    bs_opt_predict,
    full_break_transmission,
    kappa_for_channel,
    pns_predict,
)
from .pulse_optics import (
    OpticalConfig,
    ScenarioProbs,
    binomial_split,
    bob_count_pmf_after_splitter,
    coincidence_prob,
    poisson_pmf,
    sample_photon_number,
    scenario_probs,
    split_pmf,
)
from .security import (
    InfoCurvePoint,
    ThresholdResult,
    crossing_point,
    eve_accuracy_at,
    feasible,
    i_ab,
    i_eve,
    info_curve_point,
    phi,
    threshold,
)
from .single_photon import (
    AttackSample,
    ProbeModel,
    ProbeVectors,
    UnitarityReport,
    basis_symmetry_deviation,
    construct_probe_vectors,
    helstrom,
    ir_disturbance,
    ir_guess_given_disturbance,
    ir_guess_prob,
    opt_guess_prob,
    probe_model_from_disturbance,
    simulate_ir_attack,
    simulate_opt_attack,
    verify_unitarity,
)
from .states import (
    BB84Signal,
    Basis,
    BreidbartBasis,
    born_prob,
    breidbart_basis,
    breidbart_guess_prob,
    encode,
    measure,
)

__version__ = "0.1.0"

__all__ = [
    "AttackPrediction",
    "AttackSample",
    "AttackStrategy",
    "BB84Signal",
    "Basis",
    "BreidbartBasis",
    "BsInterceptResend",
    "BsOptimal",
    "InfoCurvePoint",
    "InterceptResend",
    "KappaCalibration",
    "OpticalConfig",
    "OptimalIncoherent",
    "Pns",
    "ProbeModel",
    "ProbeVectors",
    "ScenarioProbs",
    "SessionConfig",
    "SessionStats",
    "ThresholdResult",
    "UnitarityReport",
    "analytic_expectations",
    "basis_symmetry_deviation",
    "binomial_split",
    "bob_count_pmf_after_splitter",
    "born_prob",
    "breidbart_basis",
    "breidbart_guess_prob",
    "bs_ir_predict",
    "bs_opt_predict",
    "coincidence_prob",
    "construct_probe_vectors",
    "crossing_point",
    "encode",
    "eve_accuracy_at",
    "feasible",
    "full_break_transmission",
    "helstrom",
    "i_ab",
    "i_eve",
    "info_curve_point",
    "ir_disturbance",
    "ir_guess_given_disturbance",
    "ir_guess_prob",
    "kappa_for_channel",
    "measure",
    "opt_guess_prob",
    "phi",
    "pns_predict",
    "poisson_pmf",
    "probe_model_from_disturbance",
    "run_session",
    "run_sharded",
    "sample_photon_number",
    "scenario_probs",
    "shard_rng",
    "simulate_ir_attack",
    "simulate_opt_attack",
    "split_pmf",
    "threshold",
    "verify_unitarity",
]
