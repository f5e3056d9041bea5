"""Chaining tail bounds and exact process simulators.

The heavy lifting lives in the compiled extension; this package re-exports
its public names.
"""

from ._core import (
    DEFAULT_SEED,
    BinomialCI,
    ChainingParams,
    ConfigError,
    CppModel,
    EntropySum,
    ExperimentConfig,
    HypothesisCheck,
    IndexSpace,
    IndicatorModel,
    IndicatorMoments,
    KernelAuditReport,
    KernelSpec,
    LabConfig,
    PartitionFamily,
    PathSample,
    PowerLawIntensity,
    SupEstimate,
    SupExperimentResult,
    SweepCheck,
    SweepRow,
    TailBoundReport,
    TauPolicy,
    all_pass,
    bound_constant,
    chaining_weight,
    config_text,
    cpp_path,
    entropy_integral,
    entropy_sum,
    estimate_sup_prob,
    hypothesis_check,
    indicator_moments,
    indicator_path,
    kernel_hoelder_audit,
    largest_trivial_level,
    load_config,
    parse_config,
    run_sweep,
    sweep_csv,
    sweep_summary,
    tail_bound,
    wilson_interval,
)

__all__ = [
    "DEFAULT_SEED",
    "BinomialCI",
    "ChainingParams",
    "ConfigError",
    "CppModel",
    "EntropySum",
    "ExperimentConfig",
    "HypothesisCheck",
    "IndexSpace",
    "IndicatorModel",
    "IndicatorMoments",
    "KernelAuditReport",
    "KernelSpec",
    "LabConfig",
    "PartitionFamily",
    "PathSample",
    "PowerLawIntensity",
    "SupEstimate",
    "SupExperimentResult",
    "SweepCheck",
    "SweepRow",
    "TailBoundReport",
    "TauPolicy",
    "all_pass",
    "bound_constant",
    "chaining_weight",
    "config_text",
    "cpp_path",
    "entropy_integral",
    "entropy_sum",
    "estimate_sup_prob",
    "hypothesis_check",
    "indicator_moments",
    "indicator_path",
    "kernel_hoelder_audit",
    "largest_trivial_level",
    "load_config",
    "parse_config",
    "run_sweep",
    "sweep_csv",
    "sweep_summary",
    "tail_bound",
    "wilson_interval",
]

__version__ = "0.1.0"
