"""Seedable random source shared by every stochastic component.

All draws come from numpy's Philox4x64 counter-based generator (period
2**256).  A run owns exactly one :class:`Rng`; nothing here touches global
state, so a seed fully determines every stream derived from it.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = ["Rng", "ABOVE", "BELOW"]

ABOVE = "above"
BELOW = "below"

_SEED_MASK = (1 << 64) - 1


class Rng:
    """Deterministic random stream.

    Scalar methods return Python floats/ints; pass ``size`` to get arrays.
    """

    def __init__(self, seed: int = 0):
        seed = int(seed)
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = seed & _SEED_MASK
        self.gen = np.random.Generator(np.random.Philox(self.seed))

    @classmethod
    def derive(cls, seed: int, stream: int) -> "Rng":
        """Independent stream number ``stream`` under base ``seed``."""
        state = np.random.SeedSequence([int(seed) & _SEED_MASK, int(stream)]).generate_state(1, np.uint64)
        return cls(int(state[0]))

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed})"

    def uniform01(self, size=None):
        """Uniform draw(s) on [0, 1)."""
        return self.gen.random(size)

    def uniform_range(self, lo, hi, size=None):
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if np.any(lo >= hi):
            raise ValueError(f"uniform_range requires lo < hi (got lo={lo}, hi={hi})")
        out = lo + self.gen.random(size) * (hi - lo)
        # lo + u*(hi-lo) can round up to hi
        out = np.where(out >= hi, np.nextafter(hi, lo), out)
        return float(out) if np.ndim(out) == 0 else out

    def uniform_int(self, n: int, size=None):
        """Uniform integer(s) in {0, ..., n-1}."""
        if n < 1:
            raise ValueError(f"uniform_int requires n >= 1, got {n}")
        out = self.gen.integers(0, n, size=size)
        return int(out) if size is None else out

    def normal(self, mu: float = 0.0, sigma: float = 1.0, size=None):
        if sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {sigma}")
        if sigma == 0:
            return mu if size is None else np.full(size, float(mu))
        return self.gen.normal(mu, sigma, size)

    def truncated_normal_onesided(self, bound, sigma: float, direction: str, size=None):
        """Draw ``bound +/- |N(0, sigma)|`` (folded Gaussian).

        ``direction="above"`` puts all mass at or above ``bound``,
        ``"below"`` at or below it.
        """
        if not sigma > 0:
            raise ValueError(f"sigma must be > 0, got {sigma}")
        if direction not in (ABOVE, BELOW):
            raise ValueError(f"direction must be 'above' or 'below', got {direction!r}")
        step = np.abs(self.gen.normal(0.0, sigma, size))
        return bound + step if direction == ABOVE else bound - step

    def shuffle(self, values: Sequence) -> list:
        """Return a uniformly permuted copy of ``values`` (Fisher-Yates)."""
        out = list(values)
        for i in range(len(out) - 1, 0, -1):
            j = int(self.gen.integers(0, i + 1))
            out[i], out[j] = out[j], out[i]
        return out

    def permute_columns(self, matrix: np.ndarray) -> np.ndarray:
        """Shuffle every column of a 2-D array independently."""
        return self.gen.permuted(matrix, axis=0)

    def distinct_indices(self, n: int, exclude: np.ndarray, k: int) -> np.ndarray:
        """For each entry of ``exclude``, draw ``k`` distinct indices from
        ``range(n)`` that all differ from it.

        Returns an int array of shape ``(len(exclude), k)``; row order is a
        uniformly random arrangement of the chosen indices.
        """
        exclude = np.asarray(exclude, dtype=np.intp)
        if k > n - 1:
            raise ValueError(f"cannot draw {k} distinct indices from {n} excluding one")
        keys = self.gen.random((exclude.size, n))
        keys[np.arange(exclude.size), exclude] = np.inf
        return np.argsort(keys, axis=1)[:, :k]
