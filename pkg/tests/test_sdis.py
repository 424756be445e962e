import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sdislab.objective import Domain
from sdislab.rng import Rng
from sdislab.sdis import (
    CorrectionLedger,
    StrategyKind,
    correct,
    correct_batch,
    infeasibility_probability,
    poc,
)

UNIT = Domain.unit(4)
REPAIRING = [k for k in StrategyKind if k is not StrategyKind.DISMISS]
vectors = arrays(np.float64, 4, elements=st.floats(-5.0, 6.0))


@pytest.mark.parametrize("token,kind", [
    ("sat", StrategyKind.SATURATION), ("Mirror", StrategyKind.MIRROR),
    ("pen", StrategyKind.DISMISS), ("penalty", StrategyKind.DISMISS), (" cotn ", StrategyKind.COTN),
])
def test_parse(token, kind):
    assert StrategyKind.parse(token) is kind


def test_parse_unknown():
    with pytest.raises(ValueError, match="unknown strategy"):
        StrategyKind.parse("dpo")


@pytest.mark.parametrize("kind", REPAIRING)
@given(x=vectors, seed=st.integers(0, 10**6))
@settings(max_examples=60)
def test_repaired_in_bounds_and_feasible_coords_untouched(kind, x, seed):
    out = correct(kind, x, UNIT, Rng(seed))
    y = out.repaired
    assert np.all((y >= 0) & (y <= 1))
    ok = (x >= 0) & (x <= 1)
    assert np.array_equal(y[ok], x[ok])


@pytest.mark.parametrize("kind", list(StrategyKind))
@given(x=arrays(np.float64, 4, elements=st.floats(0.0, 1.0)))
@settings(max_examples=30)
def test_feasible_input_is_identity(kind, x):
    rng = Rng(0)
    out = correct(kind, x, UNIT, rng)
    assert not out.was_infeasible and np.array_equal(out.repaired, x)
    assert rng.uniform01() == Rng(0).uniform01()  # no draws consumed


@pytest.mark.parametrize("kind", [StrategyKind.SATURATION, StrategyKind.TOROIDAL, StrategyKind.MIRROR])
@given(x=vectors)
@settings(max_examples=40)
def test_deterministic_strategies_idempotent(kind, x):
    y = correct(kind, x, UNIT, Rng(0)).repaired
    assert np.array_equal(correct(kind, y, UNIT, Rng(1)).repaired, y)


def test_known_values():
    d = Domain.unit(1)
    r = Rng(0)
    assert correct("sat", [1.3], d, r).repaired[0] == 1.0
    assert correct("tor", [1.3], d, r).repaired[0] == pytest.approx(0.3)
    assert correct("tor", [-0.25], d, r).repaired[0] == pytest.approx(0.75)
    assert correct("mir", [1.3], d, r).repaired[0] == pytest.approx(0.7)
    assert correct("mir", [-0.25], d, r).repaired[0] == pytest.approx(0.25)
    assert correct("mir", [2.2], d, r).repaired[0] == pytest.approx(0.2)
    assert correct("mir", [2.5], d, r).repaired[0] == pytest.approx(0.5)
    assert correct("mir", [1.2], d, r).repaired[0] == pytest.approx(0.8)
    assert correct("dis", [1.3], d, r).rejected


@given(x=st.floats(-20, 20), k=st.integers(-3, 3))
def test_toroidal_periodic(x, k):
    d = Domain.unit(1)
    a = correct("tor", [x], d, Rng(0)).repaired[0]
    b = correct("tor", [x + k], d, Rng(0)).repaired[0]
    assert math.isclose(a, b, abs_tol=1e-9) or {round(a, 9), round(b, 9)} <= {0.0, 1.0}


@given(x=st.floats(0.0, 3.0))
def test_mirror_symmetry(x):
    d = Domain.unit(1)
    a = correct("mir", [1.0 + x], d, Rng(0)).repaired[0]
    b = correct("mir", [1.0 - x], d, Rng(0)).repaired[0]
    assert a == pytest.approx(b, abs=1e-9)
    if x <= 1.0:
        assert correct("mir", [-x], d, Rng(0)).repaired[0] == pytest.approx(x, abs=1e-12)


def test_general_box_mirror_and_toroidal():
    d = Domain([-5.0, 2.0], [5.0, 4.0])
    assert correct("mir", [6.0, 1.5], d, Rng(0)).repaired == pytest.approx([4.0, 2.5])
    assert correct("tor", [6.0, 1.5], d, Rng(0)).repaired == pytest.approx([-4.0, 3.5])


def test_cotn_lands_on_violated_side():
    d = Domain.unit(1)
    hi = correct_batch("cotn", np.full((20000, 1), 1.5), d, Rng(1))[0][:, 0]
    lo = correct_batch("cotn", np.full((20000, 1), -0.5), d, Rng(1))[0][:, 0]
    # mass piles up near the violated bound
    assert np.mean(hi > 0.5) > 0.8 and np.mean(lo < 0.5) > 0.8


def test_nan_is_treated_as_violation():
    out = correct("sat", [np.nan, 0.5, 0.5, 0.5], UNIT, Rng(0))
    assert out.violated == frozenset({0})
    assert 0 <= out.repaired[0] <= 1


def test_ledger_and_poc():
    led = CorrectionLedger(4)
    X = np.array([[0.5] * 4, [1.2, 0.5, -1, 0.5], [0.5, 0.5, 0.5, 7.0]])
    Y, acc = correct_batch("dis", X, UNIT, Rng(0), led)
    assert acc.tolist() == [True, False, False]
    assert led.generated_count == 3 and led.infeasible_count == 2
    assert led.per_dimension.tolist() == [1, 0, 1, 1]
    assert poc(led, 4) == 0.5
    with pytest.raises(ValueError):
        poc(led, 0)


def test_infeasibility_probability():
    assert infeasibility_probability(0.0, 10) == 0.0
    assert infeasibility_probability(1.0, 3) == 1.0
    assert infeasibility_probability(0.5, 2) == pytest.approx(0.75)
    for bad in [(-0.1, 2), (1.1, 2), (0.5, 0), (0.5, 2.5)]:
        with pytest.raises(ValueError):
            infeasibility_probability(*bad)


@given(st.floats(0, 1), st.integers(1, 500))
def test_infeasibility_probability_matches_direct_form(p, n):
    assert infeasibility_probability(p, n) == pytest.approx(1 - (1 - p) ** n, abs=1e-12)
