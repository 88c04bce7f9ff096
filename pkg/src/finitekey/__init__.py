"""Finite-key BB84: conservative phase-error estimates, accurate channel
estimation over real Choi matrices, and secure key lengths."""

__version__ = "0.1.0"

from .binomialbounds import (OneSidedInterval, TailBoundKind, chernoff_tail, exact_tail,
                             factorial_moment_tail, invert_bound, klar_tail, log_binomial)
from .estimation import (Construction, conventional_ambiguity, worst_case_phase_error,
                         xi_relative, xi_variational)
from .harness import ResultRow, SweepConfig, run_sweep
from .infomeasures import (EmpiricalDistribution, binary_entropy, relative_entropy,
                           shannon_entropy, variational_distance)
from .keyrate import KeyRateParams, key_length, leak_model
from .optimizer import OptimizationResult, Status, min_ambiguity_accurate, phase1_feasible
from .quantum import (AmplitudeDamping, BlochAffineMap, ChoiMatrix, Depolarizing, Explicit,
                      choi_from_bloch, choi_of, cond_entropy_x_given_e, eigenvalues_sym4,
                      sample_statistics, stats_accurate, stats_conventional)

__all__ = [
    "OneSidedInterval", "TailBoundKind", "chernoff_tail", "exact_tail", "factorial_moment_tail",
    "invert_bound", "klar_tail", "log_binomial",
    "Construction", "conventional_ambiguity", "worst_case_phase_error", "xi_relative",
    "xi_variational",
    "ResultRow", "SweepConfig", "run_sweep",
    "EmpiricalDistribution", "binary_entropy", "relative_entropy", "shannon_entropy",
    "variational_distance",
    "KeyRateParams", "key_length", "leak_model",
    "OptimizationResult", "Status", "min_ambiguity_accurate", "phase1_feasible",
    "AmplitudeDamping", "BlochAffineMap", "ChoiMatrix", "Depolarizing", "Explicit",
    "choi_from_bloch", "choi_of", "cond_entropy_x_given_e", "eigenvalues_sym4",
    "sample_statistics", "stats_accurate", "stats_conventional",
]
