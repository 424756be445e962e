import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sdislab.stats import (
    as_matrix,
    pairwise_distribution_equality,
    sb_test_aggregated,
    sb_test_default,
    sb_test_transformed,
    spacing_baseline,
    spacing_test,
    spacings,
)
from sdislab.stats.report import CSV_HEADER


def uniform(seed, runs=100, n=30):
    return np.random.default_rng(seed).random((runs, n))


@pytest.mark.parametrize("bad", [np.zeros(5), np.zeros((1, 3)), np.zeros((4, 0)),
                                 np.full((3, 2), np.nan), np.full((3, 2), 1.5)])
def test_as_matrix_rejects(bad):
    with pytest.raises(ValueError):
        as_matrix(bad)


def test_uniform_matrix_is_not_flagged():
    M = uniform(0)
    for test in (sb_test_default, sb_test_transformed, spacing_test, pairwise_distribution_equality):
        assert test(M).rejections == 0
    assert not sb_test_aggregated(M).aggregate.reject


def test_centre_bias_found_by_transformed_test():
    M = 0.5 + 0.25 * np.random.default_rng(1).standard_normal((100, 5)).clip(-1.9, 1.9)
    assert sb_test_transformed(M).rejections == 5


def test_edge_mass_found_by_default_test():
    rng = np.random.default_rng(2)
    M = rng.random((100, 4))
    M[:, 0] = np.where(rng.random(100) < 0.5, 0.0, 1.0)
    r = sb_test_default(M)
    assert r.rejected_dims == [0]
    assert r.notes["clamped"] == 100


def test_spacing_test_flags_lattice():
    rng = np.random.default_rng(3)
    M = rng.random((100, 6))
    M[:, 2] = np.round(M[:, 2] * 8) / 8
    r = spacing_test(M)
    assert 2 in r.rejected_dims
    assert r.aggregate.reject


@given(arrays(np.float64, st.tuples(st.integers(1, 20), st.integers(1, 5)), elements=st.floats(0, 1)))
@settings(max_examples=50)
def test_spacings_partition_unit_interval(M):
    S = spacings(M)
    assert S.shape == (M.shape[0] + 1, M.shape[1])
    assert np.all(S >= 0)
    np.testing.assert_allclose(S.sum(axis=0), 1.0)


def test_spacing_baseline_is_cached_and_read_only():
    a = spacing_baseline(50, 200)
    assert a is spacing_baseline(50, 200)
    assert a.size == 200 * 51
    assert a.mean() == pytest.approx(1 / 51)
    with pytest.raises(ValueError):
        a[0] = 1.0


def test_pairwise_labels_and_single_dimension():
    M = uniform(4, 50, 3)
    r = pairwise_distribution_equality(M)
    assert [d.dim for d in r.per_dimension] == ["0-1", "0-2", "1-2"]
    assert pairwise_distribution_equality(M[:, :1]).per_dimension == []


def test_pairwise_detects_shifted_dimension():
    M = uniform(5, 100, 4)
    M[:, 1] = M[:, 1] ** 3
    assert set(pairwise_distribution_equality(M).rejected_dims) == {"0-1", "1-2", "1-3"}


def test_report_rows():
    r = spacing_test(uniform(6, 30, 2))
    rows = r.rows()
    assert len(rows) == 3 and len(rows[0]) == len(CSV_HEADER)
    assert rows[-1][1] == "-1"  # aggregate row
    agg = sb_test_aggregated(uniform(6, 30, 2)).rows()
    assert agg[0][4] == ""  # no adjusted p for the aggregate


def test_alpha_validation():
    with pytest.raises(ValueError):
        sb_test_default(uniform(0, 10, 2), alpha=0.0)
