"""Experiment orchestration: grids, persistence, PoC summaries, SB battery."""
from .battery import BatteryOptions, BatteryResult, run_battery, sb_battery
from .experiment import ExperimentResult, run_experiment
from .grid import GridSpec, enumerate_grid
from .io import DataError, PositionsTable, read_positions_csv, write_positions_csv
from .summary import PocSummary, load_poc_groups, recommended_region_flag, summarize_poc, write_poc_summary

__all__ = [
    "BatteryOptions",
    "BatteryResult",
    "DataError",
    "ExperimentResult",
    "GridSpec",
    "PocSummary",
    "PositionsTable",
    "enumerate_grid",
    "load_poc_groups",
    "read_positions_csv",
    "recommended_region_flag",
    "run_battery",
    "run_experiment",
    "sb_battery",
    "summarize_poc",
    "write_poc_summary",
    "write_positions_csv",
]
