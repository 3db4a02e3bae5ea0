from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from taulsd import catalog
from taulsd.kendall import (
    centered_scaled, diag_mismatch, kendall_statistic, kendall_tau_matrix, numerator_fast,
    numerator_naive, pair_counts, tau_numerators, tau_pair,
)
from taulsd.model import sample_matrix


def test_tau_pair_examples():
    assert tau_pair([1, 2, 3, 4], [1, 2, 3, 4]) == 1
    assert tau_pair([1, 2, 3], [3, 2, 1]) == -1
    assert Fraction(tau_pair([1, 1, 2], [1, 2, 2])).limit_denominator(100) == Fraction(1, 3)
    c = pair_counts([1, 1, 2], [1, 2, 2])
    assert (c.concordant, c.discordant) == (1, 0)


def test_tau_pair_errors():
    with pytest.raises(ValueError):
        tau_pair([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        tau_pair([1], [1])


vec_pairs = st.integers(2, 200).flatmap(lambda n: st.tuples(
    hnp.arrays(np.int64, n, elements=st.integers(-4, 4)),
    hnp.arrays(np.float64, n, elements=st.floats(-1e3, 1e3, allow_nan=False))))


@given(vec_pairs)
def test_fast_equals_oracle(pair):
    x, y = pair
    assert numerator_fast(x, y) == numerator_naive(x, y)
    assert numerator_fast(y, y) == numerator_naive(y, y)


def test_fast_equals_oracle_bulk(rng):
    # 1000 random vectors, with and without ties, lengths 2..200
    for _ in range(1000):
        n = int(rng.integers(2, 201))
        x = rng.integers(0, 5, n) if rng.random() < 0.5 else rng.normal(size=n)
        y = rng.integers(0, 3, n) if rng.random() < 0.5 else rng.standard_cauchy(n)
        assert numerator_fast(x, y) == numerator_naive(x, y)


def test_matrix_matches_oracle(rng):
    X = rng.integers(0, 4, size=(5, 6))
    np.testing.assert_array_equal(tau_numerators(X), tau_numerators(X, method="naive"))


def test_diag_mismatch_examples():
    X = np.array([[3, 3, 3, 3], [1, 2, 3, 4], [1, 1, 2, 3]], dtype=float)
    np.testing.assert_allclose(diag_mismatch(X), [0, 1, 5 / 6])
    np.testing.assert_allclose(np.diag(kendall_tau_matrix(X)), [0, 1, 5 / 6])


def test_identical_rows():
    X = np.array([[1.0, 4.0, 2.0, 3.0]] * 2)
    T = kendall_tau_matrix(X)
    assert T[0, 1] == T[0, 0] == T[1, 1] == 1


def test_continuous_diagonal_is_one():
    X = sample_matrix(catalog.continuous_iid(6, 40), 2)
    np.testing.assert_array_equal(np.diag(kendall_tau_matrix(X)), 1.0)


def test_centered_scaled():
    assert not centered_scaled(np.diag([1.0, 0.5]), n=10).any()
    X = sample_matrix(catalog.example_a(6, 30), 1)
    T = kendall_tau_matrix(X)
    S = centered_scaled(T, 30, 1.5)
    off = ~np.eye(6, dtype=bool)
    np.testing.assert_allclose(S[off], 1.5 * np.sqrt(30 / 6) * T[off])
    np.testing.assert_array_equal(np.diag(S), 0)
    np.testing.assert_allclose(kendall_statistic(X, 3.0), 2 * kendall_statistic(X, 1.5))


def test_rejects_nonfinite():
    with pytest.raises(ValueError):
        kendall_tau_matrix(np.array([[1.0, np.nan, 2.0]]))


mats = st.tuples(st.integers(2, 6), st.integers(2, 25)).flatmap(
    lambda s: hnp.arrays(np.float64, s, elements=st.integers(-5, 5).map(float)))


@given(mats)
def test_matrix_properties(X):
    T = kendall_tau_matrix(X)
    assert np.array_equal(T, T.T)
    assert np.all(np.abs(T) <= 1)
    d = np.diag(T)
    assert np.all((d >= 0) & (d <= 1))
    distinct = np.array([len(np.unique(r)) == r.size for r in X])
    np.testing.assert_array_equal(d == 1, distinct)


@given(mats, st.randoms(use_true_random=False))
def test_row_permutation_equivariance(X, rnd):
    perm = list(range(X.shape[0]))
    rnd.shuffle(perm)
    T = kendall_tau_matrix(X)
    np.testing.assert_array_equal(kendall_tau_matrix(X[perm]), T[np.ix_(perm, perm)])


@given(mats)
def test_monotone_transform_invariance(X):
    T = kendall_tau_matrix(X)
    np.testing.assert_array_equal(kendall_tau_matrix(X**3), T)
    np.testing.assert_array_equal(kendall_tau_matrix(np.exp(X)), T)
