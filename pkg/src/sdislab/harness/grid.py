"""Experiment grids: which configurations to run and with which seeds."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import product

from ..engine import Configuration, ConfigurationError, CrossoverKind, MutationKind
from ..sdis import StrategyKind

__all__ = ["DEFAULT_F_VALUES", "DEFAULT_CR_VALUES", "GridSpec", "enumerate_grid", "run_seed"]

DEFAULT_F_VALUES = tuple(round(0.2 * k, 10) for k in range(1, 11))
DEFAULT_CR_VALUES = (0.0, 0.25, 0.5, 0.75, 1.0)

_LIST_KEYS = {
    "mutations": str,
    "crossovers": str,
    "sdis_list": str,
    "population_sizes": int,
    "F_values": float,
    "Cr_values": float,
}
_SCALAR_KEYS = {"runs_per_config": int, "n": int, "budget": int, "base_seed": int}


@dataclass(frozen=True)
class GridSpec:
    """Cartesian product of DE settings, each cell run ``runs_per_config``
    times.  ``budget=None`` means ``n * 10000``."""

    mutations: tuple[str, ...] = ("rand1",)
    crossovers: tuple[str, ...] = ("bin",)
    sdis_list: tuple[str, ...] = tuple(k.value for k in StrategyKind)
    population_sizes: tuple[int, ...] = (20,)
    F_values: tuple[float, ...] = DEFAULT_F_VALUES
    Cr_values: tuple[float, ...] = DEFAULT_CR_VALUES
    runs_per_config: int = 50
    n: int = 30
    budget: int | None = None
    base_seed: int = 0

    def __post_init__(self):
        for key, cast in _LIST_KEYS.items():
            values = getattr(self, key)
            if isinstance(values, (str, int, float)):
                values = (values,)
            values = tuple(cast(v) for v in values)
            if not values:
                raise ConfigurationError(f"grid axis {key!r} is empty")
            object.__setattr__(self, key, values)
        # normalise tokens early so a typo fails before any run starts
        object.__setattr__(self, "mutations", tuple(str(MutationKind.parse(m)) for m in self.mutations))
        object.__setattr__(self, "crossovers", tuple(str(CrossoverKind.parse(c)) for c in self.crossovers))
        try:
            object.__setattr__(self, "sdis_list", tuple(str(StrategyKind.parse(s)) for s in self.sdis_list))
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        if self.runs_per_config < 1:
            raise ConfigurationError(f"runs_per_config must be >= 1, got {self.runs_per_config}")
        if self.n < 1:
            raise ConfigurationError(f"n must be >= 1, got {self.n}")
        if self.base_seed < 0:
            raise ConfigurationError(f"base_seed must be >= 0, got {self.base_seed}")

    @property
    def effective_budget(self) -> int:
        return self.n * 10000 if self.budget is None else self.budget

    @property
    def size(self) -> int:
        return (len(self.mutations) * len(self.crossovers) * len(self.sdis_list)
                * len(self.population_sizes) * len(self.F_values) * len(self.Cr_values))

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in _LIST_KEYS:
            d[key] = list(d[key])
        d["budget"] = self.effective_budget
        return d

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_dict().items():
            if isinstance(value, list):
                value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GridSpec":
        """Parse ``key = value`` lines; list values are comma-separated and
        ``#`` starts a comment."""
        kwargs = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            sep = "=" if "=" in line else ":" if ":" in line else None
            if sep is None:
                raise ConfigurationError(f"line {lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split(sep, 1))
            try:
                if key in _LIST_KEYS:
                    kwargs[key] = tuple(_LIST_KEYS[key](v.strip()) for v in value.split(",") if v.strip())
                elif key in _SCALAR_KEYS:
                    kwargs[key] = _SCALAR_KEYS[key](value)
                else:
                    raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
            except ValueError as exc:
                if isinstance(exc, ConfigurationError):
                    raise
                raise ConfigurationError(f"line {lineno}: bad value for {key!r}: {value!r}") from None
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "GridSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def enumerate_grid(spec: GridSpec) -> list[Configuration]:
    """All grid cells in (mutation, crossover, sdis, N, F, Cr) order.

    Cell ``i`` carries seed ``base_seed + i * runs_per_config``; its run
    ``r`` uses ``run_seed(cell, r)``.  Cells are not validated here so that
    one impossible combination (say N too small for the mutation) fails on
    its own at run time.
    """
    cells = []
    axes = product(spec.mutations, spec.crossovers, spec.sdis_list,
                   spec.population_sizes, spec.F_values, spec.Cr_values)
    for i, (m, c, s, N, F, Cr) in enumerate(axes):
        cells.append(Configuration(
            mutation=m, crossover=c, sdis=s, N=N, F=F, Cr=Cr, n=spec.n,
            budget=spec.effective_budget, seed=spec.base_seed + i * spec.runs_per_config,
            check=False,
        ))
    return cells


def run_seed(cell: Configuration, run_index: int) -> int:
    return int(cell.seed) + int(run_index)
