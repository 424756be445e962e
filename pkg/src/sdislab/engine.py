"""Instrumented Differential Evolution on f0.

One generation is processed as a batch: every target's mutant, crossover and
correction is computed from the generation's starting population, then
survivors replace parents all at once (synchronous replacement).

Draw order inside a generation, which fixes the seed -> result mapping:

1. donor indices for all processed targets,
2. ``K`` coefficients (curr-to-rand/1 only),
3. crossover start indices, then crossover uniforms,
4. correction draws (uniform / COTN, violated coordinates, row-major),
5. one f0 draw per non-dismissed offspring, in target order.
"""
from __future__ import annotations

import enum
from dataclasses import InitVar, dataclass, field, replace

import numpy as np

from .objective import Domain, f0_evaluate_batch
from .rng import Rng
from .sdis import COTN_SCALE, CorrectionLedger, StrategyKind, correct_batch, poc

__all__ = [
    "MutationKind",
    "CrossoverKind",
    "Configuration",
    "ConfigurationError",
    "Population",
    "RunRecord",
    "initialize",
    "mutate",
    "crossover_binomial",
    "crossover_exponential",
    "step",
    "run",
]


class ConfigurationError(ValueError):
    pass


class MutationKind(str, enum.Enum):
    RAND1 = "rand1"
    RAND2 = "rand2"
    BEST1 = "best1"
    BEST2 = "best2"
    CURR_TO_BEST1 = "curr-to-best1"
    RAND_TO_BEST2 = "rand-to-best2"
    CURR_TO_RAND1 = "curr-to-rand1"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, token) -> "MutationKind":
        if isinstance(token, cls):
            return token
        key = str(token).strip().lower().replace("_", "-").replace("/", "")
        key = key.replace("current", "curr")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ConfigurationError(
            f"unknown mutation {token!r} (expected one of {', '.join(k.value for k in cls)})"
        )

    @property
    def donors(self) -> int:
        """Number of random donors, all distinct and different from the target."""
        return _DONORS[self]

    @property
    def min_population(self) -> int:
        return self.donors + 1


_DONORS = {
    MutationKind.RAND1: 3,
    MutationKind.RAND2: 5,
    MutationKind.BEST1: 2,
    MutationKind.BEST2: 4,
    MutationKind.CURR_TO_BEST1: 2,
    MutationKind.RAND_TO_BEST2: 5,
    MutationKind.CURR_TO_RAND1: 3,
}


class CrossoverKind(str, enum.Enum):
    BINOMIAL = "bin"
    EXPONENTIAL = "exp"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, token) -> "CrossoverKind":
        if isinstance(token, cls):
            return token
        key = str(token).strip().lower()
        aliases = {"bin": cls.BINOMIAL, "binomial": cls.BINOMIAL,
                   "exp": cls.EXPONENTIAL, "exponential": cls.EXPONENTIAL}
        try:
            return aliases[key]
        except KeyError:
            raise ConfigurationError(f"unknown crossover {token!r} (expected bin or exp)") from None


KV_KEYS = ("mutation", "crossover", "N", "F", "Cr", "sdis", "n", "budget", "seed")


@dataclass(frozen=True)
class Configuration:
    """One fully specified DE setup.

    ``budget`` defaults to ``n * 10000`` fitness evaluations and the domain
    to the unit hypercube of dimension ``n``.
    """

    mutation: MutationKind = MutationKind.RAND1
    crossover: CrossoverKind = CrossoverKind.BINOMIAL
    N: int = 20
    F: float = 0.5
    Cr: float = 0.9
    sdis: StrategyKind = StrategyKind.SATURATION
    n: int = 30
    budget: int | None = None
    seed: int = 0
    domain: Domain | None = None
    cotn_scale: float = COTN_SCALE
    check: InitVar[bool] = True

    def __post_init__(self, check: bool = True):
        object.__setattr__(self, "mutation", MutationKind.parse(self.mutation))
        object.__setattr__(self, "crossover", CrossoverKind.parse(self.crossover))
        try:
            object.__setattr__(self, "sdis", StrategyKind.parse(self.sdis))
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n}")
        if self.domain is None:
            object.__setattr__(self, "domain", Domain.unit(int(self.n)))
        elif self.domain.n != self.n:
            raise ConfigurationError(f"domain has {self.domain.n} dimensions but n={self.n}")
        if self.budget is None:
            object.__setattr__(self, "budget", int(self.n) * 10000)
        if check:
            self.validate()

    def validate(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n}")
        if int(self.N) != self.N or self.N < 1:
            raise ConfigurationError(f"N must be a positive integer, got {self.N}")
        if self.N < self.mutation.min_population:
            raise ConfigurationError(
                f"{self.mutation} needs N >= {self.mutation.min_population}, got N={self.N}"
            )
        if not 0.0 < self.F <= 2.0:
            raise ConfigurationError(f"F must lie in (0, 2], got {self.F}")
        if not 0.0 <= self.Cr <= 1.0:
            raise ConfigurationError(f"Cr must lie in [0, 1], got {self.Cr}")
        if int(self.budget) != self.budget or self.budget < self.N:
            raise ConfigurationError(f"budget must be an integer >= N={self.N}, got {self.budget}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.cotn_scale > 0:
            raise ConfigurationError(f"cotn_scale must be positive, got {self.cotn_scale}")

    @property
    def label(self) -> str:
        return f"DE/{self.mutation}/{self.crossover}-N{self.N}-F{self.F:g}-Cr{self.Cr:g}-{self.sdis}"

    def with_seed(self, seed: int) -> "Configuration":
        return replace(self, seed=int(seed))

    def to_kv(self) -> str:
        """Serialize to the flat ``key=value`` text form."""
        if not self.domain.is_unit():
            raise ConfigurationError("only unit-hypercube configurations serialize to key-value form")
        values = {
            "mutation": str(self.mutation),
            "crossover": str(self.crossover),
            "N": str(self.N),
            "F": repr(float(self.F)),
            "Cr": repr(float(self.Cr)),
            "sdis": str(self.sdis),
            "n": str(self.n),
            "budget": str(self.budget),
            "seed": str(self.seed),
        }
        return "".join(f"{k}={values[k]}\n" for k in KV_KEYS)

    @classmethod
    def from_kv(cls, text: str) -> "Configuration":
        raw: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"line {lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in KV_KEYS:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
            raw[key] = value
        missing = [k for k in ("mutation", "crossover", "N", "F", "Cr", "sdis", "n") if k not in raw]
        if missing:
            raise ConfigurationError(f"missing keys: {', '.join(missing)}")
        try:
            return cls(
                mutation=raw["mutation"],
                crossover=raw["crossover"],
                N=int(raw["N"]),
                F=float(raw["F"]),
                Cr=float(raw["Cr"]),
                sdis=raw["sdis"],
                n=int(raw["n"]),
                budget=int(raw["budget"]) if "budget" in raw else None,
                seed=int(raw.get("seed", 0)),
            )
        except ValueError as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(str(exc)) from None


@dataclass
class Population:
    X: np.ndarray
    fitness: np.ndarray

    @property
    def size(self) -> int:
        return self.X.shape[0]

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.fitness))

    @property
    def best(self) -> tuple[np.ndarray, float]:
        i = self.best_index
        return self.X[i].copy(), float(self.fitness[i])

    def copy(self) -> "Population":
        return Population(self.X.copy(), self.fitness.copy())


@dataclass(frozen=True)
class RunRecord:
    config: Configuration
    best_position: np.ndarray
    best_fitness: float
    poc: float
    per_dimension_violations: np.ndarray
    infeasible_count: int
    evaluations_used: int
    seed: int
    trace: tuple[float, ...] | None = field(default=None, compare=False)


def initialize(config: Configuration, rng: Rng, ledger: CorrectionLedger | None = None) -> Population:
    """Sample ``N`` points uniformly in the domain and evaluate each once."""
    if config.budget < config.N:
        raise ConfigurationError(f"budget {config.budget} < N={config.N}")
    d = config.domain
    X = d.lo + rng.uniform01((config.N, d.n)) * d.width
    X = np.minimum(X, d.hi)
    fitness = f0_evaluate_batch(rng, X)
    if ledger is not None:
        ledger.record_feasible(config.N)
    return Population(X, fitness)


def _mutants(kind: MutationKind, X: np.ndarray, best: int, targets: np.ndarray,
             F: float, rng: Rng) -> np.ndarray:
    N = X.shape[0]
    if N < kind.min_population:
        raise ValueError(f"{kind} needs at least {kind.min_population} members, population has {N}")
    r = rng.distinct_indices(N, targets, kind.donors)
    x = X[targets]
    xb = X[best]
    d = [X[r[:, k]] for k in range(kind.donors)]
    if kind is MutationKind.RAND1:
        return d[0] + F * (d[1] - d[2])
    if kind is MutationKind.RAND2:
        return d[0] + F * (d[1] - d[2]) + F * (d[3] - d[4])
    if kind is MutationKind.BEST1:
        return xb + F * (d[0] - d[1])
    if kind is MutationKind.BEST2:
        return xb + F * (d[0] - d[1]) + F * (d[2] - d[3])
    if kind is MutationKind.CURR_TO_BEST1:
        return x + F * (xb - x) + F * (d[0] - d[1])
    if kind is MutationKind.RAND_TO_BEST2:
        return d[0] + F * (xb - d[0]) + F * (d[1] - d[2]) + F * (d[3] - d[4])
    if kind is MutationKind.CURR_TO_RAND1:
        K = rng.uniform01(len(targets))[:, None]
        return x + K * (d[0] - x) + F * (d[1] - d[2])
    raise ValueError(f"unknown mutation {kind!r}")  # pragma: no cover


def mutate(kind: MutationKind, population: Population, target_index: int, F: float, rng: Rng) -> np.ndarray:
    """Mutant vector for one target (may lie outside the domain)."""
    kind = MutationKind.parse(kind)
    targets = np.array([target_index])
    return _mutants(kind, population.X, population.best_index, targets, F, rng)[0]


def _pair(parent, mutant):
    parent = np.asarray(parent, dtype=float)
    mutant = np.asarray(mutant, dtype=float)
    if parent.shape != mutant.shape:
        raise ValueError(f"parent shape {parent.shape} != mutant shape {mutant.shape}")
    return np.atleast_2d(parent), np.atleast_2d(mutant), parent.ndim == 1


def crossover_binomial(parent, mutant, Cr: float, rng: Rng) -> np.ndarray:
    """Take each mutant coordinate with probability ``Cr``; one random
    coordinate is always taken.  Works row-wise on 2-D input."""
    P, M, single = _pair(parent, mutant)
    rows, n = P.shape
    forced = rng.uniform_int(n, size=rows)
    take = rng.uniform01((rows, n)) < Cr
    take[np.arange(rows), forced] = True
    out = np.where(take, M, P)
    return out[0] if single else out


def crossover_exponential(parent, mutant, Cr: float, rng: Rng) -> np.ndarray:
    """Copy a circular block of mutant coordinates starting at a random
    index; the block grows one coordinate per success of ``U < Cr`` and
    stops at the first failure or once it covers all ``n`` coordinates."""
    P, M, single = _pair(parent, mutant)
    rows, n = P.shape
    start = rng.uniform_int(n, size=rows)
    if n > 1:
        cont = rng.uniform01((rows, n - 1)) < Cr
        length = 1 + np.cumprod(cont, axis=1).sum(axis=1)
    else:
        length = np.ones(rows, dtype=np.int64)
    offset = (np.arange(n)[None, :] - start[:, None]) % n
    take = offset < length[:, None]
    out = np.where(take, M, P)
    return out[0] if single else out


def step(config: Configuration, population: Population, ledger: CorrectionLedger,
         rng: Rng, remaining: int | None = None) -> Population:
    """Produce the next generation.

    When ``remaining`` is smaller than ``N`` only targets ``0..remaining-1``
    produce offspring; the rest survive unchanged.  Every processed target
    consumes one budget slot, dismissed or not.
    """
    N = population.size
    r = N if remaining is None else min(N, int(remaining))
    if r <= 0:
        raise ValueError("evaluation budget exhausted")
    targets = np.arange(r)
    X = population.X
    mutants = _mutants(config.mutation, X, population.best_index, targets, config.F, rng)
    if config.mutation is MutationKind.CURR_TO_RAND1:
        offspring = mutants
    elif config.crossover is CrossoverKind.BINOMIAL:
        offspring = crossover_binomial(X[targets], mutants, config.Cr, rng)
    else:
        offspring = crossover_exponential(X[targets], mutants, config.Cr, rng)
    offspring, accepted = correct_batch(
        config.sdis, offspring, config.domain, rng, ledger, config.cotn_scale
    )
    fit = np.full(r, np.inf)
    fit[accepted] = f0_evaluate_batch(rng, offspring[accepted])
    wins = accepted & (fit <= population.fitness[targets])
    nxt = population.copy()
    idx = targets[wins]
    nxt.X[idx] = offspring[wins]
    nxt.fitness[idx] = fit[wins]
    return nxt


def run(config: Configuration, trace: bool = False) -> RunRecord:
    """Execute one full run, consuming exactly ``config.budget`` slots."""
    config.validate()
    rng = Rng(config.seed)
    ledger = CorrectionLedger(config.domain.n)
    pop = initialize(config, rng, ledger)
    used = config.N
    history = [float(pop.fitness.min())] if trace else None
    while used < config.budget:
        remaining = config.budget - used
        pop = step(config, pop, ledger, rng, remaining)
        used += min(config.N, remaining)
        if trace:
            history.append(float(pop.fitness.min()))
    assert ledger.generated_count == used == config.budget
    position, fitness = pop.best
    return RunRecord(
        config=config,
        best_position=position,
        best_fitness=fitness,
        poc=poc(ledger, config.budget),
        per_dimension_violations=ledger.per_dimension.copy(),
        infeasible_count=ledger.infeasible_count,
        evaluations_used=used,
        seed=int(config.seed),
        trace=tuple(history) if trace else None,
    )


def default_sb_config(**overrides) -> Configuration:
    """The structural-bias probe setup: n=30 and a budget of n * 10000."""
    params = dict(n=30)
    params.update(overrides)
    return Configuration(**params)
