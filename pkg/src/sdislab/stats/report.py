"""Test results and their CSV / JSON forms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["TEST_NAMES", "DimensionResult", "AggregateResult", "TestReport", "CSV_HEADER"]

TEST_NAMES = (
    "ad_default",
    "ad_transformed",
    "ad_aggregated",
    "spacing",
    "ks_pairs",
    "corr_outliers",
    "corr_permutation",
)

CSV_HEADER = ("test", "dim", "statistic", "p_raw", "p_adj", "reject")


@dataclass(frozen=True)
class DimensionResult:
    """One per-dimension (or per-pair) outcome; ``dim`` is an int or an
    ``"i-j"`` pair label."""

    dim: int | str
    statistic: float
    p_raw: float
    p_adj: float
    reject: bool


@dataclass(frozen=True)
class AggregateResult:
    statistic: float
    p_value: float
    reject: bool


def _num(v: float) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return format(float(v), ".17g")


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return None if math.isnan(v) else float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


@dataclass
class TestReport:
    """Verdicts of one test on one sample matrix.

    ``p_value`` of an aggregate may be NaN for tests whose decision rule is
    not a p-value threshold (corr_outliers, corr_permutation); ``notes``
    carries the test-specific extras.
    """

    __test__ = False  # keep pytest from collecting this class

    test_name: str
    alpha: float
    per_dimension: list[DimensionResult] | None = None
    aggregate: AggregateResult | None = None
    notes: dict = field(default_factory=dict)

    @property
    def rejections(self) -> int:
        return sum(r.reject for r in self.per_dimension or ())

    @property
    def rejected_dims(self) -> list:
        return [r.dim for r in self.per_dimension or () if r.reject]

    def rows(self) -> list[tuple[str, ...]]:
        out = []
        for r in self.per_dimension or ():
            out.append((self.test_name, str(r.dim), _num(r.statistic), _num(r.p_raw),
                        _num(r.p_adj), str(int(r.reject))))
        if self.aggregate is not None:
            a = self.aggregate
            out.append((self.test_name, "-1", _num(a.statistic), _num(a.p_value), "",
                        str(int(a.reject))))
        return out

    def summary(self) -> dict:
        d = {"test": self.test_name, "alpha": self.alpha}
        if self.per_dimension is not None:
            d["tested"] = len(self.per_dimension)
            d["rejections"] = self.rejections
            d["rejected"] = self.rejected_dims
        if self.aggregate is not None:
            d["aggregate"] = {
                "statistic": self.aggregate.statistic,
                "p_value": self.aggregate.p_value,
                "reject": self.aggregate.reject,
            }
        if self.notes:
            d["notes"] = self.notes
        return _jsonable(d)
