import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats

from sdislab.stats import ad_pvalue, ad_statistic, by_adjust, clamp_unit, fold_center

# Upper-tail probabilities P(A^2 > z) for m = 100, from tests/oracles/ad_montecarlo.py
# (10^6 uniform samples, textbook A^2 formula, independent of the library code).
MC_TAIL_M100 = {
    0.5: 0.74656, 1.0: 0.35761, 1.5: 0.17693, 2.0: 0.09228,
    2.492: 0.05018, 3.0: 0.02758, 3.857: 0.01030, 5.0: 0.00287,
}


def _a2_direct(x):
    # literal sum over i of (2i - 1) [ln u_i + ln(1 - u_{m+1-i})]
    u = np.sort(x)
    m = len(u)
    s = sum((2 * i - 1) * (np.log(u[i - 1]) + np.log(1 - u[m - i])) for i in range(1, m + 1))
    return -m - s / m


@pytest.mark.parametrize("z,p", sorted(MC_TAIL_M100.items()))
def test_pvalue_matches_monte_carlo(z, p):
    assert ad_pvalue(z, 100) == pytest.approx(p, abs=0.005)


def test_pvalue_limits_and_monotonicity():
    z = np.linspace(0.01, 12, 400)
    p = ad_pvalue(z, 50)
    assert np.all(np.diff(p) <= 1e-12)
    assert p[0] > 0.99 and p[-1] < 1e-4
    assert np.all((p >= 0) & (p <= 1))


@given(arrays(np.float64, st.integers(1, 60), elements=st.floats(0.001, 0.999)))
def test_statistic_matches_direct_formula(x):
    assert ad_statistic(x) == pytest.approx(_a2_direct(x), rel=1e-9, abs=1e-9)


def test_statistic_vectorized_axis():
    M = np.random.default_rng(0).random((40, 6))
    col = ad_statistic(M, axis=0)
    assert col.shape == (6,)
    assert col[3] == pytest.approx(ad_statistic(M[:, 3]))


def test_clamp_counts_boundary_values():
    x, k = clamp_unit([0.0, 0.5, 1.0])
    assert k == 2 and 0 < x[0] and x[-1] < 1
    assert np.isfinite(ad_statistic(x))


def test_fold_center():
    assert fold_center([0.5, 0.0, 1.0, 0.25]).tolist() == [0.0, 1.0, 1.0, 0.5]


def test_pvalue_errors():
    with pytest.raises(ValueError):
        ad_pvalue(1.0, 0)
    with pytest.raises(ValueError):
        ad_pvalue(-1.0, 10)


def test_by_known_values():
    assert by_adjust([0.01, 0.02]).tolist() == pytest.approx([0.03, 0.03])
    assert by_adjust([1.0]).tolist() == [1.0]


@given(arrays(np.float64, st.integers(1, 50), elements=st.floats(0, 1)))
def test_by_matches_scipy(p):
    np.testing.assert_allclose(by_adjust(p), stats.false_discovery_control(p, method="by"), atol=1e-12)


@given(arrays(np.float64, st.integers(1, 50), elements=st.floats(0, 1)))
def test_by_is_monotone_and_dominates(p):
    q = by_adjust(p)
    assert np.all(q >= p - 1e-15) and np.all(q <= 1)
    order = np.argsort(p, kind="stable")
    assert np.all(np.diff(q[order]) >= -1e-15)


def test_by_rejects_bad_input():
    for bad in ([], [1.2], [-0.1]):
        with pytest.raises(ValueError):
            by_adjust(bad)
