"""Distributed multiple testing under Byzantine p-value rewriting.

A library and CLI for simulating the Benjamini-Hochberg procedure run by a
central agent over p-value reports from d nodes, some of which an attacker
has captured and rewrites adversarially. Ships four attack models, two
center-side defenses, and Monte Carlo estimators of the attacked-FDR
bounds, with deterministic per-trial random streams so every run is
reproducible at any parallelism.
"""

from .attacks import (
    AttackOutcome,
    CapturedNodeStat,
    apply_attack,
    bh_classifier_attack,
    enhanced_bh_classifier_attack,
    oracle_attack,
    select_captured,
    shuffling_attack,
)
from .bh import RejectionResult, TrialMetrics, bh_procedure, realized_metrics
from .bounds import (
    BOUND_KINDS,
    BoundEstimate,
    all_ones_upper,
    bh_baseline,
    classifier_fdr_loo,
    classifier_fdr_upper,
    distributed_fdr_upper,
    oracle_fdr_exact,
    shuffling_fdr_upper,
)
from .defense import DEFENSES, counter_remove_zeros, counter_resample_zeros
from .model import (
    ATTACK_MODELS,
    AltMeanDistribution,
    AttackConfig,
    HypothesisSet,
    PValueReport,
    build_hypotheses,
    normal_cdf,
    sample_statistics,
    split_reports,
    two_sided_p,
)
from .presets import PRESETS, Preset, PresetRun, get_preset
from .reportio import parse_report, serialize_report
from .sim import (
    AggregateStats,
    ExperimentConfig,
    TrialRecord,
    aggregate,
    config_at,
    estimate_bound,
    even_null_counts,
    run_experiment,
    run_trial,
    run_trials,
    sweep,
    trial_rng,
)

__version__ = "0.1.0"

__all__ = [
    "ATTACK_MODELS",
    "BOUND_KINDS",
    "DEFENSES",
    "PRESETS",
    "AggregateStats",
    "AltMeanDistribution",
    "AttackConfig",
    "AttackOutcome",
    "BoundEstimate",
    "CapturedNodeStat",
    "ExperimentConfig",
    "HypothesisSet",
    "PValueReport",
    "Preset",
    "PresetRun",
    "RejectionResult",
    "TrialMetrics",
    "TrialRecord",
    "aggregate",
    "all_ones_upper",
    "apply_attack",
    "bh_baseline",
    "bh_classifier_attack",
    "bh_procedure",
    "build_hypotheses",
    "classifier_fdr_loo",
    "classifier_fdr_upper",
    "config_at",
    "counter_remove_zeros",
    "counter_resample_zeros",
    "distributed_fdr_upper",
    "enhanced_bh_classifier_attack",
    "estimate_bound",
    "even_null_counts",
    "get_preset",
    "normal_cdf",
    "oracle_attack",
    "oracle_fdr_exact",
    "parse_report",
    "realized_metrics",
    "run_experiment",
    "run_trial",
    "run_trials",
    "sample_statistics",
    "select_captured",
    "serialize_report",
    "shuffling_attack",
    "shuffling_fdr_upper",
    "split_reports",
    "sweep",
    "trial_rng",
    "two_sided_p",
]
