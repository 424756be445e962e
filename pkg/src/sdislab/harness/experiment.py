"""Run a grid of DE configurations and persist final positions."""
from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..engine import Configuration, RunRecord, run
from .grid import GridSpec, enumerate_grid, run_seed
from .io import PositionsTable, write_positions_csv, write_violations_csv

__all__ = ["CellResult", "ExperimentResult", "MANIFEST_NAME", "QUANTILE_CONVENTION",
           "cell_filename", "config_dict", "run_cell", "run_experiment"]

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
QUANTILE_CONVENTION = "linear interpolation between order statistics (Hyndman-Fan type 7)"


def cell_filename(index: int, config: Configuration) -> str:
    return (f"cell{index:05d}_{config.mutation}_{config.crossover}_{config.sdis}"
            f"_N{config.N}_F{config.F:g}_Cr{config.Cr:g}.csv")


def config_dict(config: Configuration) -> dict:
    return {
        "mutation": str(config.mutation),
        "crossover": str(config.crossover),
        "N": int(config.N),
        "F": float(config.F),
        "Cr": float(config.Cr),
        "sdis": str(config.sdis),
        "n": int(config.n),
        "budget": int(config.budget),
        "seed": int(config.seed),
    }


@dataclass
class CellResult:
    index: int
    config: Configuration
    records: list[RunRecord] = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ExperimentResult:
    spec: GridSpec
    cells: list[CellResult]
    out_dir: Path | None

    @property
    def records(self) -> list[RunRecord]:
        return [r for c in self.cells for r in c.records]

    @property
    def failed(self) -> list[CellResult]:
        return [c for c in self.cells if not c.ok]


def run_cell(index: int, config: Configuration, runs: int) -> CellResult:
    """All runs of one cell; any exception marks only this cell as failed."""
    try:
        config.validate()
        records = [run(config.with_seed(run_seed(config, r))) for r in range(runs)]
    except Exception as exc:  # noqa: BLE001 - isolate failures per cell
        return CellResult(index, config, error=f"{type(exc).__name__}: {exc}")
    return CellResult(index, config, records)


def _run_cell_args(args):
    return run_cell(*args)


def run_experiment(spec: GridSpec, out_dir=None, parallelism: int = 1) -> ExperimentResult:
    """Execute every cell of ``spec``.

    With ``out_dir`` set, writes one positions CSV (and a matching
    ``*.violations.csv``) per successful cell plus ``manifest.json``.
    Output does not depend on ``parallelism``: seeds come from cell and run
    indices, and all files are written by this process in cell order.
    """
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    cells = enumerate_grid(spec)
    jobs = [(i, c, spec.runs_per_config) for i, c in enumerate(cells)]
    log.info("running %d cells x %d runs (parallelism %d)", len(cells), spec.runs_per_config, parallelism)
    if parallelism == 1 or len(jobs) == 1:
        results = [run_cell(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(_run_cell_args, jobs))
    for res in results:
        if not res.ok:
            log.warning("cell %d (%s) failed: %s", res.index, res.config.label, res.error)

    out = None
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        manifest_cells = []
        for res in results:
            name = cell_filename(res.index, res.config)
            entry = {"index": res.index, "config": config_dict(res.config),
                     "runs": spec.runs_per_config}
            if res.ok:
                write_positions_csv(out / name, PositionsTable.from_records(res.records))
                write_violations_csv(out / name.replace(".csv", ".violations.csv"), res.records)
                entry.update(status="ok", file=name)
            else:
                entry.update(status="failed", file=None, error=res.error)
            manifest_cells.append(entry)
        manifest = {
            "spec": spec.to_dict(),
            "quantile_convention": QUANTILE_CONVENTION,
            "float_format": ".17g",
            "positions_header": "run,seed,poc,dim_0,...,dim_{n-1}",
            "cells": manifest_cells,
        }
        with open(out / MANIFEST_NAME, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
    return ExperimentResult(spec, results, out)
