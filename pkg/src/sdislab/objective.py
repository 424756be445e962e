"""The stochastic probe function f0 and the box it is defined on."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import Rng

__all__ = ["Domain", "f0_evaluate", "f0_evaluate_batch", "contains", "violated_dimensions"]


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box ``lower[i] <= x[i] <= upper[i]``."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper):
            raise ValueError(f"lower has {len(lower)} entries, upper has {len(upper)}")
        if not lower:
            raise ValueError("domain must have at least one dimension")
        for i, (lo, hi) in enumerate(zip(lower, upper)):
            if not lo < hi:
                raise ValueError(f"dimension {i}: lower {lo} must be < upper {hi}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def unit(cls, n: int = 30) -> "Domain":
        """The hypercube [0, 1]^n."""
        return cls((0.0,) * n, (1.0,) * n)

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def lo(self) -> np.ndarray:
        return np.array(self.lower)

    @property
    def hi(self) -> np.ndarray:
        return np.array(self.upper)

    @property
    def width(self) -> np.ndarray:
        return self.hi - self.lo

    def is_unit(self) -> bool:
        return all(v == 0.0 for v in self.lower) and all(v == 1.0 for v in self.upper)


def _check_dim(domain: Domain, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != domain.n:
        raise ValueError(f"vector has {x.shape[-1]} coordinates, domain has {domain.n}")
    return x


def f0_evaluate(rng: Rng, x=None) -> float:
    """Evaluate f0: a fresh U(0,1) draw, whatever ``x`` is."""
    return float(rng.uniform01())


def f0_evaluate_batch(rng: Rng, X: np.ndarray) -> np.ndarray:
    """Evaluate f0 on every row of ``X`` (one draw per row, row order)."""
    return rng.uniform01(len(X))


def contains(domain: Domain, x) -> bool:
    x = _check_dim(domain, x)
    return bool(np.all((x >= domain.lo) & (x <= domain.hi)))


def violated_dimensions(domain: Domain, x) -> set[int]:
    x = _check_dim(domain, x)
    bad = ~((x >= domain.lo) & (x <= domain.hi))  # NaN counts as violated
    return {int(i) for i in np.flatnonzero(bad)}
