"""Global sensitivity analysis of a segmented fire spread model.

Sobol indices, k-NN mutual information, the delta index and PAWN, with
bootstrap and jackknife intervals, on a Latin hypercube / truncated
normal sampling layer.
"""
__version__ = "0.1.0"

from .sampling import RandomVariableSpec, SampleSet, lhs_sample, sobol_matrices, truncnorm_inverse_cdf
from .models import ModelDefinition, dry_eucalypt_model, dry_eucalypt_rate, ishigami_model, linear_model
from .sobol import DegenerateModelError, SobolEstimate, estimate_sobol
from .moment_independent import delta_given_data, differential_entropy, knn_mutual_information, normalize_mi
from .pawn import PawnEstimate, ks_distance, pawn_given_data
from .resampling import IndexEstimate, bootstrap_ci, grouped_jackknife_ci, rank_indices
from .experiments import (
    StageLabel,
    SampleSizes,
    EstimatorSettings,
    stage_classify,
    run_point_study,
    sweep_mu,
    detect_crossover,
    conditional_profile,
    convergence_study,
    timing_study,
)

__all__ = [
    "RandomVariableSpec", "SampleSet", "lhs_sample", "sobol_matrices", "truncnorm_inverse_cdf",
    "ModelDefinition", "dry_eucalypt_model", "dry_eucalypt_rate", "ishigami_model", "linear_model",
    "DegenerateModelError", "SobolEstimate", "estimate_sobol",
    "delta_given_data", "differential_entropy", "knn_mutual_information", "normalize_mi",
    "PawnEstimate", "ks_distance", "pawn_given_data",
    "IndexEstimate", "bootstrap_ci", "grouped_jackknife_ci", "rank_indices",
    "StageLabel", "SampleSizes", "EstimatorSettings", "stage_classify", "run_point_study", "sweep_mu",
    "detect_crossover", "conditional_profile", "convergence_study", "timing_study",
]
