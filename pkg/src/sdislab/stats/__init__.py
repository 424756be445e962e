"""Structural-bias and anisotropy test battery."""
from .ad import ad_pvalue, ad_statistic, clamp_unit, fold_center
from .correlation import (
    REFERENCE_THRESHOLD,
    PermutationResult,
    corr_outliers_report,
    correlation_baseline_threshold,
    correlation_outlier_fraction,
    degenerate_dimensions,
    pair_indices,
    pearson_pairs,
    permutation_anisotropy_test,
)
from .ks import ks_2sample, ks_statistic
from .multitest import by_adjust
from .report import TEST_NAMES, AggregateResult, DimensionResult, TestReport
from .uniformity import (
    DEFAULT_ALPHA,
    as_matrix,
    pairwise_distribution_equality,
    sb_test_aggregated,
    sb_test_default,
    sb_test_transformed,
    spacing_baseline,
    spacing_test,
    spacings,
)

__all__ = [
    "AggregateResult",
    "DEFAULT_ALPHA",
    "DimensionResult",
    "REFERENCE_THRESHOLD",
    "PermutationResult",
    "TEST_NAMES",
    "TestReport",
    "ad_pvalue",
    "ad_statistic",
    "as_matrix",
    "by_adjust",
    "clamp_unit",
    "corr_outliers_report",
    "correlation_baseline_threshold",
    "correlation_outlier_fraction",
    "degenerate_dimensions",
    "fold_center",
    "ks_2sample",
    "ks_statistic",
    "pair_indices",
    "pairwise_distribution_equality",
    "pearson_pairs",
    "permutation_anisotropy_test",
    "sb_test_aggregated",
    "sb_test_default",
    "sb_test_transformed",
    "spacing_baseline",
    "spacing_test",
    "spacings",
]
