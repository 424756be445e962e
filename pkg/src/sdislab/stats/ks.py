from __future__ import annotations

import numpy as np
from scipy.special import kolmogorov

__all__ = ["ks_2sample", "ks_statistic"]


def ks_statistic(a, b) -> float:
    """sup |ECDF_a - ECDF_b|.

    Both ECDFs are step functions, so on each interval between consecutive
    distinct values of the smaller sample the gap is extremal at an end;
    only those ends are evaluated against the larger sample.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("two-sample KS needs two non-empty samples")
    if a.size > b.size:
        a, b = b, a
    a = np.sort(a)
    if np.any(b[1:] < b[:-1]):
        b = np.sort(b)
    ua = np.unique(a)
    fa = np.searchsorted(a, ua, side="right") / a.size
    fb_at = np.searchsorted(b, ua, side="right") / b.size
    fb_before = np.searchsorted(b, ua, side="left") / b.size
    d = max(fb_before[0], np.max(np.abs(fa - fb_at)))
    if ua.size > 1:
        d = max(d, np.max(np.abs(fa[:-1] - fb_before[1:])))
    return float(d)


def ks_2sample(a, b) -> tuple[float, float]:
    """Two-sample Kolmogorov-Smirnov test.

    Returns ``(D, p)`` with ``p`` from the limiting Kolmogorov distribution
    evaluated at ``sqrt(en) * D``, ``en = |a||b| / (|a| + |b|)``.
    """
    d = ks_statistic(a, b)
    na, nb = np.size(a), np.size(b)
    en = na * nb / (na + nb)
    p = float(kolmogorov(np.sqrt(en) * d)) if d > 0 else 1.0
    return d, min(max(p, 0.0), 1.0)
