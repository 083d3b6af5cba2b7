"""Exact and statistical checks of correctness and privacy."""

from .enumerate import (DEFAULT_BUDGET, BudgetExceeded, EnumeratedJoint, TinyConfig,
                        enumerate_joint, high_erasure_tiny, mass_is_one)
from .joint import (ExplicitJoint, JointDistribution, ZeroProbabilityCondition,
                    empirical_distribution, mutual_information, total_variation)
from .montecarlo import MonteCarloStats, monte_carlo_stats, run_trial, structural_digest
from .report import (CONDITIONS, THRESHOLD, ConditionResult, PrivacyReport, announcement_tv,
                     bob_announced, cathy_announced,
                     completed, completed_different_choice, completed_same_choice,
                     decode_error_probability, privacy_report)

__all__ = [
    "CONDITIONS", "DEFAULT_BUDGET", "THRESHOLD", "BudgetExceeded", "ConditionResult",
    "EnumeratedJoint", "ExplicitJoint", "JointDistribution", "MonteCarloStats",
    "PrivacyReport", "TinyConfig", "ZeroProbabilityCondition", "announcement_tv", "bob_announced", "cathy_announced",
    "completed", "completed_different_choice", "completed_same_choice",
    "decode_error_probability", "empirical_distribution", "enumerate_joint",
    "high_erasure_tiny", "mass_is_one", "monte_carlo_stats", "mutual_information",
    "privacy_report", "run_trial", "structural_digest", "total_variation",
]
