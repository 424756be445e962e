"""Structural-bias tests on runs x dimensions matrices of final positions.

Each function takes a matrix whose rows are independent runs and whose
columns are problem dimensions, all values in [0, 1].
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from ..rng import Rng
from .ad import ad_pvalue, ad_statistic, clamp_unit, fold_center
from .ks import ks_2sample
from .multitest import by_adjust
from .report import AggregateResult, DimensionResult, TestReport

__all__ = [
    "DEFAULT_ALPHA",
    "SPACING_REPLICATES",
    "as_matrix",
    "sb_test_default",
    "sb_test_transformed",
    "sb_test_aggregated",
    "spacings",
    "spacing_baseline",
    "spacing_test",
    "pairwise_distribution_equality",
]

DEFAULT_ALPHA = 0.01
SPACING_REPLICATES = 1000
SPACING_SEED = 20210401


def as_matrix(values, min_runs: int = 2) -> np.ndarray:
    """Validate a sample matrix and return it as a float array."""
    M = np.asarray(values, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"sample matrix must be 2-D (runs x dimensions), got shape {M.shape}")
    runs, n = M.shape
    if runs < min_runs:
        raise ValueError(f"need at least {min_runs} runs, got {runs}")
    if n < 1:
        raise ValueError("sample matrix has no dimensions")
    if not np.all(np.isfinite(M)):
        raise ValueError("sample matrix contains non-finite values")
    if np.any((M < 0) | (M > 1)):
        r, c = np.argwhere((M < 0) | (M > 1))[0]
        raise ValueError(f"value {M[r, c]!r} at run {r}, dimension {c} is outside [0, 1]")
    return M


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _per_dimension_ad(M: np.ndarray, alpha: float, name: str) -> TestReport:
    _, clamped = clamp_unit(M)
    a2 = ad_statistic(M, axis=0)
    p = ad_pvalue(a2, M.shape[0])
    adj = by_adjust(p)
    rows = [DimensionResult(j, float(a2[j]), float(p[j]), float(adj[j]), bool(adj[j] < alpha))
            for j in range(M.shape[1])]
    return TestReport(name, alpha, per_dimension=rows, notes={"clamped": clamped})


def sb_test_default(matrix, alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Per-dimension AD test against U(0,1), BY-adjusted across dimensions."""
    _check_alpha(alpha)
    return _per_dimension_ad(as_matrix(matrix), alpha, "ad_default")


def sb_test_transformed(matrix, alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Per-dimension AD test on samples folded about the centre.

    Sensitive to mass pulled towards (or pushed away from) the middle of the
    domain, which the plain test needs far larger samples to see.
    """
    _check_alpha(alpha)
    return _per_dimension_ad(fold_center(as_matrix(matrix)), alpha, "ad_transformed")


def sb_test_aggregated(matrix, alpha: float = DEFAULT_ALPHA) -> TestReport:
    """One AD test on all values pooled across runs and dimensions."""
    _check_alpha(alpha)
    M = as_matrix(matrix)
    pooled = M.ravel()
    _, clamped = clamp_unit(pooled)
    a2 = ad_statistic(pooled)
    p = ad_pvalue(a2, pooled.size)
    return TestReport("ad_aggregated", alpha, aggregate=AggregateResult(a2, p, p < alpha),
                      notes={"clamped": clamped, "pooled_size": int(pooled.size)})


def spacings(matrix) -> np.ndarray:
    """Gaps between consecutive sorted values of each column, including the
    gaps to 0 and to 1; shape ``(runs + 1, n)``, columns sum to 1."""
    M = np.sort(np.asarray(matrix, dtype=float), axis=0)
    if M.ndim == 1:
        M = M[:, None]
    n = M.shape[1]
    padded = np.vstack([np.zeros((1, n)), M, np.ones((1, n))])
    return np.diff(padded, axis=0)


@lru_cache(maxsize=16)
def _baseline(runs: int, replicates: int, seed: int) -> np.ndarray:
    U = Rng(seed).uniform01((replicates, runs))
    base = np.sort(spacings(U.T).ravel())
    base.setflags(write=False)
    return base


def spacing_baseline(runs: int, replicates: int = SPACING_REPLICATES, seed: int = SPACING_SEED) -> np.ndarray:
    """Pooled spacings of ``replicates`` uniform samples of size ``runs``."""
    if runs < 1 or replicates < 1:
        raise ValueError("runs and replicates must be positive")
    return _baseline(int(runs), int(replicates), int(seed))


def spacing_test(matrix, alpha: float = DEFAULT_ALPHA, replicates: int = SPACING_REPLICATES,
                 seed: int = SPACING_SEED, baseline: np.ndarray | None = None) -> TestReport:
    """1-spacing test: per-dimension two-sample KS of the spacings against a
    pooled uniform baseline, BY-adjusted; the aggregate row pools the
    spacings of all dimensions."""
    _check_alpha(alpha)
    M = as_matrix(matrix)
    base = spacing_baseline(M.shape[0], replicates, seed) if baseline is None else np.asarray(baseline)
    S = spacings(M)
    stats = [ks_2sample(S[:, j], base) for j in range(S.shape[1])]
    d = np.array([s[0] for s in stats])
    p = np.array([s[1] for s in stats])
    adj = by_adjust(p)
    rows = [DimensionResult(j, float(d[j]), float(p[j]), float(adj[j]), bool(adj[j] < alpha))
            for j in range(S.shape[1])]
    d_all, p_all = ks_2sample(S.ravel(), base)
    return TestReport("spacing", alpha, per_dimension=rows,
                      aggregate=AggregateResult(d_all, p_all, p_all < alpha),
                      notes={"baseline_size": int(base.size), "baseline_replicates": replicates,
                             "baseline_seed": seed})


def pairwise_distribution_equality(matrix, alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Two-sample KS for every pair of dimensions, BY-adjusted over pairs."""
    _check_alpha(alpha)
    M = as_matrix(matrix)
    pairs = list(combinations(range(M.shape[1]), 2))
    if not pairs:
        return TestReport("ks_pairs", alpha, per_dimension=[])
    stats = [ks_2sample(M[:, i], M[:, j]) for i, j in pairs]
    p = np.array([s[1] for s in stats])
    adj = by_adjust(p)
    rows = [DimensionResult(f"{i}-{j}", stats[k][0], stats[k][1], float(adj[k]), bool(adj[k] < alpha))
            for k, (i, j) in enumerate(pairs)]
    return TestReport("ks_pairs", alpha, per_dimension=rows)
