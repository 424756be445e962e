"""Run the full structural-bias battery on one positions matrix."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from ..rng import Rng
from ..stats import (
    DEFAULT_ALPHA,
    TestReport,
    as_matrix,
    corr_outliers_report,
    correlation_baseline_threshold,
    pairwise_distribution_equality,
    permutation_anisotropy_test,
    sb_test_aggregated,
    sb_test_default,
    sb_test_transformed,
    spacing_test,
)
from ..stats.report import CSV_HEADER, _jsonable
from .io import DataError, read_positions_csv

__all__ = ["BatteryOptions", "BatteryResult", "sb_battery", "run_battery", "overview_line", "OVERVIEW_COLUMNS"]

OVERVIEW_COLUMNS = (
    "name",
    "runs",
    "n",
    "ad_default_rejections",
    "ad_transformed_rejections",
    "spacing_rejections",
    "spacing_aggregate_reject",
    "ks_pairs_rejections",
    "corr_outlier_fraction",
    "corr_permutation_count",
    "corr_permutation_reject",
    "ad_aggregated_reject",
)

# stream ids under the battery seed
_THRESHOLD_STREAM = 1
_PERMUTATION_STREAM = 2


@dataclass(frozen=True)
class BatteryOptions:
    alpha: float = DEFAULT_ALPHA
    permutations: int = 1000
    bootstrap: int = 1000
    seed: int = 0
    threshold: float | None = None
    threshold_simulations: int = 10000
    spacing_replicates: int = 1000


@dataclass
class BatteryResult:
    name: str
    reports: dict[str, TestReport]
    overview: dict

    @property
    def clean(self) -> bool:
        """No per-dimension rejection and no aggregate AD rejection."""
        o = self.overview
        return (o["ad_default_rejections"] == 0 and o["ad_transformed_rejections"] == 0
                and o["spacing_rejections"] == 0 and o["ks_pairs_rejections"] == 0
                and not o["ad_aggregated_reject"])

    def csv_rows(self) -> list[tuple[str, ...]]:
        rows = []
        for report in self.reports.values():
            rows.extend(report.rows())
        return rows

    def to_json(self) -> dict:
        return _jsonable({
            "name": self.name,
            "overview": self.overview,
            "tests": {k: r.summary() for k, r in self.reports.items()},
        })

    def write(self, out_dir, stem: str | None = None) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = stem or self.name
        csv_path = out / f"{stem}.battery.csv"
        json_path = out / f"{stem}.battery.json"
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            w.writerows(self.csv_rows())
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")
        return csv_path, json_path


@lru_cache(maxsize=32)
def _threshold(runs: int, simulations: int, seed: int) -> float:
    return correlation_baseline_threshold(runs, simulations, 99.0, Rng.derive(seed, _THRESHOLD_STREAM))


def run_battery(matrix, options: BatteryOptions = BatteryOptions(), name: str = "sample") -> BatteryResult:
    """All seven tests on an in-memory runs x dimensions matrix."""
    M = as_matrix(matrix, min_runs=3)
    a = options.alpha
    threshold = options.threshold
    if threshold is None:
        threshold = _threshold(M.shape[0], options.threshold_simulations, options.seed)
    perm = permutation_anisotropy_test(M, a, options.permutations, options.bootstrap,
                                       Rng.derive(options.seed, _PERMUTATION_STREAM))
    reports = {
        "ad_default": sb_test_default(M, a),
        "ad_transformed": sb_test_transformed(M, a),
        "ad_aggregated": sb_test_aggregated(M, a),
        "spacing": spacing_test(M, a, replicates=options.spacing_replicates),
        "ks_pairs": pairwise_distribution_equality(M, a),
        "corr_outliers": corr_outliers_report(M, threshold, a),
        "corr_permutation": perm.to_report(a),
    }
    overview = {
        "name": name,
        "runs": int(M.shape[0]),
        "n": int(M.shape[1]),
        "ad_default_rejections": reports["ad_default"].rejections,
        "ad_transformed_rejections": reports["ad_transformed"].rejections,
        "spacing_rejections": reports["spacing"].rejections,
        "spacing_aggregate_reject": bool(reports["spacing"].aggregate.reject),
        "ks_pairs_rejections": reports["ks_pairs"].rejections,
        "corr_outlier_fraction": float(reports["corr_outliers"].aggregate.statistic),
        "corr_permutation_count": perm.count,
        "corr_permutation_reject": bool(perm.reject),
        "ad_aggregated_reject": bool(reports["ad_aggregated"].aggregate.reject),
    }
    return BatteryResult(name, reports, overview)


def sb_battery(path, options: BatteryOptions = BatteryOptions(), out_dir=None) -> BatteryResult:
    """Battery on a positions CSV; with ``out_dir`` also writes
    ``<stem>.battery.csv`` and ``<stem>.battery.json`` there."""
    path = Path(path)
    table = read_positions_csv(path)
    if table.positions.shape[0] < 3:
        raise DataError(f"{path}: need at least 3 runs, got {table.positions.shape[0]}")
    result = run_battery(table.positions, options, name=path.stem)
    if out_dir is not None:
        result.write(out_dir, path.stem)
    return result


def overview_line(result: BatteryResult) -> str:
    """The overview row as CSV text, in :data:`OVERVIEW_COLUMNS` order."""
    cells = []
    for key in OVERVIEW_COLUMNS:
        v = result.overview[key]
        if isinstance(v, bool):
            v = int(v)
        elif isinstance(v, float):
            v = f"{v:.4f}"
        cells.append(str(v))
    return ",".join(cells)
