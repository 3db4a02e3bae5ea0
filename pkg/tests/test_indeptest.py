import numpy as np
import pytest
from scipy import stats

from taulsd import catalog, indeptest as it
from taulsd.model import sample_matrix


def test_band_matrix():
    A = it.band_matrix(4, 2.0)
    assert A[1, 0] == 4 and A[2, 0] == 8 and A[3, 1] == 8 and A[3, 0] == 16
    assert not np.triu(A).any()
    assert not it.band_matrix(5, 0.0).any()
    with pytest.raises(ValueError):
        it.band_matrix(3, -1.0)


def test_alternative_embedding():
    m = catalog.table4(2, 30)
    Xt, Zt = it.alternative_components(m, m, 4)
    np.testing.assert_array_equal(it.gen_alternative(m, m, 0.0, 4), Xt)
    Z = it.gen_alternative(m, m, 1.0, 4)
    np.testing.assert_array_equal(Z[0], Xt[0])
    np.testing.assert_array_equal(Z[1], Xt[1] + Zt[0])
    Z2 = it.gen_alternative(m, m, 2.0, 4)
    np.testing.assert_allclose(Z2 - Xt, it.band_matrix(2, 2.0) @ Zt)
    assert not np.array_equal(Xt, Zt)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        it.gen_alternative(catalog.table4(3, 10), catalog.table4(4, 10), 1.0, 0)
    with pytest.raises(ValueError):
        it.test_statistic(np.zeros((3, 10)), np.zeros((3, 11)))


def test_statistic_invariances():
    m = catalog.table4(6, 40)
    X = sample_matrix(m, 2)
    assert it.test_statistic(X, X) == 0
    assert it.test_statistic(X[::-1], X) == 0
    assert 0 < it.test_statistic(X, sample_matrix(m, 3)) <= 1


def test_nearest_rank():
    v = np.arange(1, 101) / 100
    assert it.nearest_rank(v, 0.95) == 0.95
    assert it.nearest_rank([3.0, 1.0, 2.0], 0.5) == 2.0
    with pytest.raises(ValueError):
        it.calibrate_cutoff(catalog.table4(3, 10), reps=10)
    with pytest.raises(ValueError):
        it.calibrate_cutoff(catalog.table4(3, 10), reps=30, level=1.0)


def test_report_counts_and_determinism():
    m = catalog.table4(7, 49)
    cal = it.calibrate_cutoff(m, 40, 0.95, 3)
    again = it.calibrate_cutoff(m, 40, 0.95, 3)
    assert cal.to_json() == again.to_json()
    assert cal.rejections == sum(d > cal.cutoff for d in cal.distances)
    rep = it.empirical_power(m, m, 1.0, 30, cal.cutoff, 9)
    assert rep.rejection_rate == sum(d > cal.cutoff for d in rep.distances) / 30
    assert rep.to_json() == it.empirical_power(m, m, 1.0, 30, cal.cutoff, 9).to_json()


def test_size_within_binomial_band():
    m = catalog.table4(10, 100)
    res = it.size_power_table(m, (0.0,), 200, 200, 0.95, seed=0)
    lo, hi = stats.binom.interval(0.99, 200, 0.05)
    k = res["evaluation"][0.0].rejections
    assert lo <= k <= hi


def test_power_monotone_in_alpha():
    m = catalog.table4(7, 49)
    votes = 0
    for run in range(3):
        res = it.size_power_table(m, (0.0, 1.0, 2.0), 40, 40, 0.95, seed=100 + run)
        r = [res["evaluation"][a].rejection_rate for a in (0.0, 1.0, 2.0)]
        votes += r[0] <= r[1] <= r[2]
    assert votes >= 2


def test_small_shape_power():
    m = catalog.table4(7, 49)
    res = it.size_power_table(m, (1.0,), 200, 200, 0.95, seed=0)
    assert res["evaluation"][1.0].rejection_rate >= 0.7


def test_randomized_ties_diagnostic():
    m = catalog.table4(7, 49)
    cal = it.calibrate_cutoff(m, 200, 0.95, 1)
    tie = cal.extra["tie_reject_prob"]
    assert 0 <= tie <= 1
    assert it.randomized_rate(cal, tie) == pytest.approx(0.05, abs=0.02)
    assert it.randomized_rate(cal, 0.0) == cal.rejection_rate
