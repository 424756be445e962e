"""PoC summaries over grid cells."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..engine import Configuration, RunRecord
from .experiment import MANIFEST_NAME, QUANTILE_CONVENTION
from .io import DataError, fmt, read_positions_csv

__all__ = [
    "RECOMMENDED_F",
    "RECOMMENDED_CR",
    "PocSummary",
    "summarize_poc",
    "write_poc_summary",
    "load_poc_groups",
    "recommended_region_flag",
]

#: (F, Cr) pairs commonly recommended in the DE literature.
RECOMMENDED_F = (0.483, 0.7, 0.916)
RECOMMENDED_CR = (0.755, 0.99)

SUMMARY_COLUMNS = ("mutation", "crossover", "sdis", "N", "F", "Cr", "median", "iqr")


def recommended_region_flag(F: float, Cr: float, tol: float = 1e-9) -> bool:
    return any(abs(F - f) <= tol for f in RECOMMENDED_F) and any(abs(Cr - c) <= tol for c in RECOMMENDED_CR)


@dataclass(frozen=True)
class PocSummary:
    config: Configuration
    samples: tuple[float, ...]
    median: float
    q1: float
    q3: float
    histogram: tuple[int, ...]

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1

    @property
    def key(self) -> tuple:
        c = self.config
        return (str(c.mutation), str(c.crossover), str(c.sdis), c.N, c.F, c.Cr)


def _poc_values(group: Iterable) -> np.ndarray:
    return np.array([g.poc if isinstance(g, RunRecord) else float(g) for g in group], dtype=float)


def summarize_poc(groups: Mapping[Configuration, Sequence], bins: int = 20) -> list[PocSummary]:
    """Median, IQR (type-7 quantiles) and a ``bins``-bin histogram on [0, 1]
    of the PoC values of each configuration.

    ``groups`` maps each configuration to its run records or bare PoC values.
    """
    out = []
    for config, group in groups.items():
        x = _poc_values(group)
        if x.size == 0:
            raise ValueError(f"no PoC samples for {config.label}")
        q1, med, q3 = np.quantile(x, [0.25, 0.5, 0.75])
        hist, _ = np.histogram(x, bins=bins, range=(0.0, 1.0))
        out.append(PocSummary(config, tuple(x.tolist()), float(med), float(q1), float(q3),
                              tuple(int(h) for h in hist)))
    return out


def write_poc_summary(summaries: Sequence[PocSummary], out_dir, bins: int = 20) -> tuple[Path, Path]:
    """Write ``poc_summary.csv`` (one row per cell) and ``poc_histogram.csv``
    (one row per cell and bin)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary_path = out / "poc_summary.csv"
    hist_path = out / "poc_histogram.csv"
    edges = np.linspace(0.0, 1.0, bins + 1)
    with open(summary_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for s in summaries:
            m, c, d, N, F, Cr = s.key
            w.writerow([m, c, d, N, fmt(F), fmt(Cr), fmt(s.median), fmt(s.iqr)])
    with open(hist_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS[:6] + ("bin", "lo", "hi", "count"))
        for s in summaries:
            m, c, d, N, F, Cr = s.key
            for b, count in enumerate(s.histogram):
                w.writerow([m, c, d, N, fmt(F), fmt(Cr), b, fmt(edges[b]), fmt(edges[b + 1]), count])
    return summary_path, hist_path


def load_poc_groups(results_dir) -> dict[Configuration, np.ndarray]:
    """Rebuild ``{configuration: PoC values}`` from a results directory."""
    root = Path(results_dir)
    try:
        with open(root / MANIFEST_NAME, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise DataError(f"{root / MANIFEST_NAME}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{root / MANIFEST_NAME}: invalid JSON ({exc})") from None
    if manifest.get("quantile_convention", QUANTILE_CONVENTION) != QUANTILE_CONVENTION:
        raise DataError(f"{root / MANIFEST_NAME}: unsupported quantile convention")
    groups = {}
    for cell in manifest.get("cells", []):
        if cell.get("status") != "ok":
            continue
        table = read_positions_csv(root / cell["file"], unit_range=False)
        config = Configuration(**cell["config"], check=False)
        groups[config] = table.pocs
    return groups
