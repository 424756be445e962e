"""Correlation-based anisotropy detection between pairs of dimensions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import Rng
from .report import AggregateResult, TestReport
from .uniformity import DEFAULT_ALPHA, as_matrix

__all__ = [
    "REFERENCE_THRESHOLD",
    "pair_indices",
    "pearson_pairs",
    "degenerate_dimensions",
    "correlation_baseline_threshold",
    "correlation_outlier_fraction",
    "corr_outliers_report",
    "PermutationResult",
    "permutation_anisotropy_test",
]

#: Published 99th percentile of |rho| for 100 independent uniform pairs.
REFERENCE_THRESHOLD = 0.2484

_CHUNK = 2_000_000


def pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Unordered pairs in the order (0,1), (0,2), ..., (n-2, n-1)."""
    return np.triu_indices(n, k=1)


def _standardize(M: np.ndarray) -> np.ndarray:
    Z = M - M.mean(axis=0)
    norm = np.sqrt((Z * Z).sum(axis=0))
    flat = (np.ptp(M, axis=0) == 0) | (norm == 0)  # the mean of a constant column may round
    norm[flat] = 1.0
    Z = Z / norm
    Z[:, flat] = 0.0
    return Z


def pearson_pairs(matrix) -> np.ndarray:
    """Sample Pearson coefficient for every unordered pair of columns.

    A pair involving a zero-variance column gets coefficient 0; see
    :func:`degenerate_dimensions` to find such columns.
    """
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] < 3:
        raise ValueError("pearson_pairs needs a 2-D matrix with at least 3 runs")
    Z = _standardize(M)
    C = np.clip(Z.T @ Z, -1.0, 1.0)
    return C[pair_indices(M.shape[1])]


def degenerate_dimensions(matrix) -> list[int]:
    M = np.asarray(matrix, dtype=float)
    return [int(j) for j in np.flatnonzero(np.ptp(M, axis=0) == 0)]


def correlation_baseline_threshold(runs: int = 100, simulations: int = 10000, percentile: float = 99.0,
                                   rng: Rng | None = None) -> float:
    """``percentile`` of |rho| between two independent U(0,1) samples of
    size ``runs``, estimated from ``simulations`` simulated pairs."""
    if not 0 < percentile <= 100:
        raise ValueError(f"percentile must lie in (0, 100], got {percentile}")
    if simulations < 1000:
        raise ValueError(f"need at least 1000 simulations, got {simulations}")
    if runs < 3:
        raise ValueError(f"need at least 3 runs, got {runs}")
    rng = Rng(0) if rng is None else rng
    block = max(1, _CHUNK // runs)
    out = []
    for start in range(0, simulations, block):
        k = min(block, simulations - start)
        A = rng.uniform01((k, runs))
        B = rng.uniform01((k, runs))
        A -= A.mean(axis=1, keepdims=True)
        B -= B.mean(axis=1, keepdims=True)
        rho = (A * B).sum(axis=1) / np.sqrt((A * A).sum(axis=1) * (B * B).sum(axis=1))
        out.append(np.abs(rho))
    return float(np.percentile(np.concatenate(out), percentile))


def correlation_outlier_fraction(matrix, threshold: float = REFERENCE_THRESHOLD) -> float:
    """Fraction of dimension pairs whose |rho| is strictly above ``threshold``."""
    rho = np.abs(pearson_pairs(matrix))
    if rho.size == 0:
        return 0.0
    return float(np.mean(rho > threshold))


def corr_outliers_report(matrix, threshold: float = REFERENCE_THRESHOLD,
                         alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Outlier-fraction check; flags the matrix when more than ``alpha`` of
    the pairs exceed the threshold.  No multiple-testing correction."""
    M = as_matrix(matrix, min_runs=3)
    rho = np.abs(pearson_pairs(M))
    frac = float(np.mean(rho > threshold)) if rho.size else 0.0
    i, j = pair_indices(M.shape[1])
    hits = np.flatnonzero(rho > threshold)
    return TestReport(
        "corr_outliers",
        alpha,
        aggregate=AggregateResult(frac, float("nan"), frac > alpha),
        notes={
            "threshold": threshold,
            "pairs": int(rho.size),
            "outliers": int(hits.size),
            "outlier_pairs": [f"{i[k]}-{j[k]}" for k in hits],
            "degenerate_dimensions": degenerate_dimensions(M),
        },
    )


@dataclass(frozen=True)
class PermutationResult:
    count: int
    expected: float
    critical_count: int
    outlier_pairs: frozenset[tuple[int, int]]
    reject: bool
    pairs: int
    bootstrap_counts: np.ndarray

    @property
    def fraction(self) -> float:
        return self.count / self.pairs if self.pairs else 0.0

    @property
    def tail_fraction(self) -> float:
        """Share of bootstrap counts at least as large as the observed one."""
        return float(np.mean(self.bootstrap_counts >= self.count))

    def to_report(self, alpha: float) -> TestReport:
        return TestReport(
            "corr_permutation",
            alpha,
            aggregate=AggregateResult(float(self.count), float("nan"), self.reject),
            notes={
                "expected": self.expected,
                "critical_count": self.critical_count,
                "fraction": self.fraction,
                "bootstrap_tail_fraction": self.tail_fraction,
                "outlier_pairs": [f"{i}-{j}" for i, j in sorted(self.outlier_pairs)],
            },
        )


def permutation_anisotropy_test(matrix, alpha: float = DEFAULT_ALPHA, permutations: int = 1000,
                                bootstrap: int = 1000, rng: Rng | None = None) -> PermutationResult:
    """Count dimension pairs whose |rho| exceeds a per-pair permutation
    critical value, and compare that count with its bootstrapped null.

    Each pair's critical value is the ``1 - alpha`` percentile of |rho|
    recomputed after independently shuffling every column.  The null law of
    the count comes from ``bootstrap`` further shuffles in which every
    coefficient is replaced by its permuted counterpart.
    """
    if permutations < 100 or bootstrap < 100:
        raise ValueError("permutations and bootstrap must both be >= 100")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    M = as_matrix(matrix, min_runs=3)
    rng = Rng(0) if rng is None else rng
    n = M.shape[1]
    npairs = n * (n - 1) // 2
    observed = np.abs(pearson_pairs(M))

    def permuted_coefficients(times: int) -> np.ndarray:
        out = np.empty((times, npairs))
        for k in range(times):
            out[k] = np.abs(pearson_pairs(rng.permute_columns(M)))
        return out

    q = 100.0 * (1.0 - alpha)
    critical = np.percentile(permuted_coefficients(permutations), q, axis=0)
    hits = observed > critical
    counts = (permuted_coefficients(bootstrap) > critical).sum(axis=1)
    critical_count = int(np.percentile(counts, q, method="higher"))
    i, j = pair_indices(n)
    count = int(hits.sum())
    return PermutationResult(
        count=count,
        expected=alpha * npairs,
        critical_count=critical_count,
        outlier_pairs=frozenset((int(i[k]), int(j[k])) for k in np.flatnonzero(hits)),
        reject=count > critical_count,
        pairs=npairs,
        bootstrap_counts=counts,
    )
