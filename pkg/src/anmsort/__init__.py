"""Simulation, sortability diagnostics and sort-and-regress baselines for linear
additive noise models."""

from .anm import (
    AnmInstance,
    Dataset,
    DegenerateColumnError,
    NoiseSpec,
    SigmaDist,
    WeightDist,
    analytic_covariance,
    expected_log_abs_weight,
    sample_data,
    sample_instance,
    solve_alpha_for_target,
    standardize,
)
from .discovery import (
    ALGORITHMS,
    WeightEstimate,
    r2_sort_n_regress,
    random_regress,
    threshold_to_dag,
    var_sort_n_regress,
)
from .evaluation import distances, shd, sid
from .graphs import Dag, d_separated, path_length_index, sample_er_dag, sample_sf_dag
from .regression import lasso_path_bic, ols_fit, r_squared
from .sortability import (
    SortabilityReport,
    Weighting,
    cev_criterion,
    r2_criterion,
    sortability,
    sortability_reports,
    var_criterion,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AnmInstance",
    "Dag",
    "Dataset",
    "DegenerateColumnError",
    "NoiseSpec",
    "SigmaDist",
    "SortabilityReport",
    "WeightDist",
    "WeightEstimate",
    "Weighting",
    "analytic_covariance",
    "cev_criterion",
    "d_separated",
    "distances",
    "expected_log_abs_weight",
    "lasso_path_bic",
    "ols_fit",
    "path_length_index",
    "r2_criterion",
    "r2_sort_n_regress",
    "r_squared",
    "random_regress",
    "sample_data",
    "sample_er_dag",
    "sample_instance",
    "sample_sf_dag",
    "shd",
    "sid",
    "solve_alpha_for_target",
    "sortability",
    "sortability_reports",
    "standardize",
    "threshold_to_dag",
    "var_criterion",
    "var_sort_n_regress",
]
