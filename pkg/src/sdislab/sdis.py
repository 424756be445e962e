"""Strategies of dealing with infeasible solutions (SDIS) and infeasibility
bookkeeping.

Every strategy except Dismiss repairs coordinate-wise: only the violated
coordinates of an offspring are touched, each one independently.  Dismiss
rejects the whole vector and the caller keeps the parent.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .objective import Domain
from .rng import ABOVE, BELOW, Rng

__all__ = [
    "StrategyKind",
    "CorrectionLedger",
    "CorrectionOutcome",
    "COTN_SCALE",
    "correct",
    "correct_batch",
    "poc",
    "infeasibility_probability",
]

#: COTN standard deviation as a fraction of the domain width.
COTN_SCALE = 1.0 / 3.0

# redraw cap for COTN; P(|Z| > 3) per draw makes hitting it essentially impossible
_COTN_MAX_ROUNDS = 1000


class StrategyKind(str, enum.Enum):
    COTN = "cotn"
    DISMISS = "dis"
    MIRROR = "mir"
    SATURATION = "sat"
    TOROIDAL = "tor"
    UNIFORM = "uni"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, token: str) -> "StrategyKind":
        """Parse a strategy token; penalty spellings map onto Dismiss."""
        key = str(token).strip().lower()
        try:
            return _STRATEGY_ALIASES[key]
        except KeyError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown strategy {token!r} (expected one of {valid})") from None

    @property
    def deterministic(self) -> bool:
        return self in (StrategyKind.SATURATION, StrategyKind.TOROIDAL, StrategyKind.MIRROR)


_STRATEGY_ALIASES = {k.value: k for k in StrategyKind}
_STRATEGY_ALIASES.update(
    {
        "complete-one-sided-truncated-normal": StrategyKind.COTN,
        "dismiss": StrategyKind.DISMISS,
        "pen": StrategyKind.DISMISS,
        "penalty": StrategyKind.DISMISS,
        "penalise": StrategyKind.DISMISS,
        "penalize": StrategyKind.DISMISS,
        "mirror": StrategyKind.MIRROR,
        "saturation": StrategyKind.SATURATION,
        "toroidal": StrategyKind.TOROIDAL,
        "uniform": StrategyKind.UNIFORM,
    }
)


@dataclass
class CorrectionLedger:
    """Per-run infeasibility counters."""

    n: int
    infeasible_count: int = 0
    generated_count: int = 0
    per_dimension: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.per_dimension is None:
            self.per_dimension = np.zeros(self.n, dtype=np.int64)

    def record(self, violated: np.ndarray) -> None:
        """Account for a batch of generated solutions.

        ``violated`` is a boolean ``(rows, n)`` mask of out-of-bounds
        coordinates.
        """
        violated = np.atleast_2d(violated)
        self.generated_count += violated.shape[0]
        self.infeasible_count += int(violated.any(axis=1).sum())
        self.per_dimension += violated.sum(axis=0)

    def record_feasible(self, count: int) -> None:
        self.generated_count += int(count)


@dataclass(frozen=True)
class CorrectionOutcome:
    repaired: np.ndarray | None
    violated: frozenset[int]

    @property
    def rejected(self) -> bool:
        return self.repaired is None

    @property
    def was_infeasible(self) -> bool:
        return bool(self.violated)


def _violation_mask(X: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return ~((X >= lo) & (X <= hi))


def _cotn(X, bad, lo, hi, rng: Rng, scale: float):
    rows, cols = np.nonzero(bad)
    below = ~(X[rows, cols] > hi[cols])  # NaN falls back to the lower bound
    anchor = np.where(below, lo[cols], hi[cols])
    sigma = (hi - lo)[cols] * scale
    out = np.empty(rows.size)
    pending = np.arange(rows.size)
    for _ in range(_COTN_MAX_ROUNDS):
        if pending.size == 0:
            break
        step = np.abs(rng.normal(0.0, 1.0, pending.size)) * sigma[pending]
        b = below[pending]
        draw = np.where(b, anchor[pending] + step, anchor[pending] - step)
        c = cols[pending]
        ok = (draw >= lo[c]) & (draw <= hi[c])
        out[pending[ok]] = draw[ok]
        pending = pending[~ok]
    else:
        raise RuntimeError("COTN redraw did not terminate")
    Y = X.copy()
    Y[rows, cols] = out
    return Y


def correct_batch(
    kind: StrategyKind,
    X: np.ndarray,
    domain: Domain,
    rng: Rng,
    ledger: CorrectionLedger | None = None,
    cotn_scale: float = COTN_SCALE,
) -> tuple[np.ndarray, np.ndarray]:
    """Apply ``kind`` to every row of ``X``.

    Returns ``(Y, accepted)`` where ``accepted[r]`` is False only for rows
    dismissed by :attr:`StrategyKind.DISMISS` (``Y[r]`` is then the
    untouched input row).  Random strategies consume draws for violated
    coordinates only, in row-major order.
    """
    kind = StrategyKind.parse(kind) if not isinstance(kind, StrategyKind) else kind
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != domain.n:
        raise ValueError(f"expected an (rows, {domain.n}) array, got shape {X.shape}")
    lo, hi = domain.lo, domain.hi
    bad = _violation_mask(X, lo, hi)
    if ledger is not None:
        ledger.record(bad)
    accepted = np.ones(X.shape[0], dtype=bool)
    if not bad.any():
        return X.copy(), accepted

    if kind is StrategyKind.DISMISS:
        accepted = ~bad.any(axis=1)
        return X.copy(), accepted

    Y = X.copy()
    w = hi - lo
    if kind.deterministic:
        X = np.where(np.isnan(X), lo, X)  # NaN has no side; send it to the lower bound
    if kind is StrategyKind.SATURATION:
        Y = np.clip(X, lo, hi)
    elif kind is StrategyKind.TOROIDAL:
        wrapped = lo + np.mod(X - lo, w)
        Y = np.where(bad, np.clip(wrapped, lo, hi), X)
    elif kind is StrategyKind.MIRROR:
        y = np.mod(X - lo, 2.0 * w)
        y = np.where(y > w, 2.0 * w - y, y)
        Y = np.where(bad, np.clip(lo + y, lo, hi), X)
    elif kind is StrategyKind.UNIFORM:
        cols = np.nonzero(bad)[1]
        u = rng.uniform01(cols.size)
        Y[bad] = np.minimum(lo[cols] + u * w[cols], hi[cols])
    elif kind is StrategyKind.COTN:
        Y = _cotn(X, bad, lo, hi, rng, cotn_scale)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown strategy {kind!r}")
    return Y, accepted


def correct(
    kind: StrategyKind,
    x,
    domain: Domain,
    rng: Rng,
    ledger: CorrectionLedger | None = None,
    cotn_scale: float = COTN_SCALE,
) -> CorrectionOutcome:
    """Single-vector form of :func:`correct_batch`."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != domain.n:
        raise ValueError(f"vector has shape {x.shape}, domain has {domain.n} dimensions")
    violated = frozenset(int(i) for i in np.flatnonzero(_violation_mask(x, domain.lo, domain.hi)))
    Y, accepted = correct_batch(kind, x[None, :], domain, rng, ledger, cotn_scale)
    return CorrectionOutcome(Y[0] if accepted[0] else None, violated)


def poc(ledger: CorrectionLedger, budget: int) -> float:
    """Percentage of corrections: infeasible solutions over the budget."""
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    return ledger.infeasible_count / budget


def infeasibility_probability(p: float, n: int) -> float:
    """Probability ``1 - (1 - p)**n`` that at least one of ``n`` independent
    coordinates leaves the domain when each does so with rate ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if p == 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-p))
