"""CSV persistence for final positions and battery output."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..engine import RunRecord

__all__ = ["DataError", "PositionsTable", "fmt", "write_positions_csv", "read_positions_csv",
           "write_violations_csv"]


class DataError(ValueError):
    """Malformed input data (CSV content, value ranges)."""


def fmt(x: float) -> str:
    """17 significant digits: enough for a lossless float round-trip."""
    return format(float(x), ".17g")


@dataclass
class PositionsTable:
    runs: np.ndarray
    seeds: np.ndarray
    pocs: np.ndarray
    positions: np.ndarray

    @property
    def n(self) -> int:
        return self.positions.shape[1]

    @classmethod
    def from_records(cls, records: list[RunRecord]) -> "PositionsTable":
        return cls(
            runs=np.arange(len(records)),
            seeds=np.array([r.seed for r in records], dtype=np.uint64),
            pocs=np.array([r.poc for r in records]),
            positions=np.array([r.best_position for r in records]),
        )


def _header(n: int) -> list[str]:
    return ["run", "seed", "poc"] + [f"dim_{j}" for j in range(n)]


def write_positions_csv(path, table: PositionsTable) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_header(table.n))
        for r, seed, p, x in zip(table.runs, table.seeds, table.pocs, table.positions):
            w.writerow([int(r), int(seed), fmt(p)] + [fmt(v) for v in x])
    return path


def write_violations_csv(path, records: list[RunRecord]) -> Path:
    path = Path(path)
    n = len(records[0].per_dimension_violations) if records else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["run", "seed", "infeasible"] + [f"dim_{j}" for j in range(n)])
        for k, rec in enumerate(records):
            w.writerow([k, rec.seed, rec.infeasible_count] + [int(v) for v in rec.per_dimension_violations])
    return path


def read_positions_csv(path, unit_range: bool = True) -> PositionsTable:
    """Read a positions CSV; raises :class:`DataError` naming the offending
    row (1-based, header is row 1) on any malformation."""
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if header[:3] != ["run", "seed", "poc"] or len(header) < 4:
            raise DataError(f"{path}: row 1: expected header 'run,seed,poc,dim_0,...', got {','.join(header)!r}")
        n = len(header) - 3
        if header[3:] != [f"dim_{j}" for j in range(n)]:
            raise DataError(f"{path}: row 1: position columns must be dim_0..dim_{n - 1}")
        runs, seeds, pocs, rows = [], [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: row {lineno}: expected {len(header)} fields, got {len(row)}")
            try:
                runs.append(int(row[0]))
                seeds.append(int(row[1]))
                pocs.append(float(row[2]) if row[2].strip() else float("nan"))
                x = [float(v) for v in row[3:]]
            except ValueError as exc:
                raise DataError(f"{path}: row {lineno}: {exc}") from None
            if not all(np.isfinite(x)):
                raise DataError(f"{path}: row {lineno}: non-finite position value")
            if unit_range and any(v < 0.0 or v > 1.0 for v in x):
                bad = next(j for j, v in enumerate(x) if v < 0.0 or v > 1.0)
                raise DataError(f"{path}: row {lineno}: dim_{bad}={x[bad]!r} outside [0, 1]")
            rows.append(x)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return PositionsTable(
        runs=np.array(runs),
        seeds=np.array(seeds, dtype=np.uint64),
        pocs=np.array(pocs),
        positions=np.array(rows, dtype=float),
    )
