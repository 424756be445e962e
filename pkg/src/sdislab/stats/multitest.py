"""Benjamini-Yekutieli false-discovery-rate adjustment."""
from __future__ import annotations

import numpy as np

__all__ = ["by_adjust"]


def by_adjust(pvalues) -> np.ndarray:
    """BY step-up adjusted p-values, valid under arbitrary dependence.

    ``adj_(i) = min_{j >= i} min(1, p_(j) * m * c(m) / j)`` with
    ``c(m) = sum_{k<=m} 1/k``; results come back in input order.
    """
    p = np.asarray(pvalues, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("by_adjust needs at least one p-value")
    if np.any(np.isnan(p)) or np.any((p < 0) | (p > 1)):
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    c = np.sum(1.0 / np.arange(1, m + 1))
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m * c / np.arange(1, m + 1)
    adj_sorted = np.minimum(np.minimum.accumulate(scaled[::-1])[::-1], 1.0)
    out = np.empty(m)
    out[order] = adj_sorted
    return out
