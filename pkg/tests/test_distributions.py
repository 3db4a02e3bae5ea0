import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from taulsd.distributions import (
    PL4_CONST, Cauchy, DiscretePowerLaw4, FinitePMF, Normal, StudentT1, cdf, cdf_strict,
    expect, expect_with_error, from_json,
)
from taulsd.model import ModelSpec, Periodic, sample_matrix

CONTINUOUS = [Cauchy(0, 1), Cauchy(2, 30), Normal(5, 1), Normal(0, 7), StudentT1()]
DISCRETE = [DiscretePowerLaw4(), FinitePMF((-2.0, 2.0), (0.5, 0.5)),
            FinitePMF((-2.0, -1.0, 1.0, 2.0), (0.3, 0.2, 0.2, 0.3))]
ALL = CONTINUOUS + DISCRETE


def test_cdf_examples():
    assert cdf(Normal(5, 1), 5.0) == pytest.approx(0.5)
    d = FinitePMF((-2.0, 2.0), (0.5, 0.5))
    assert cdf(d, 2.0) == 1.0 and cdf_strict(d, 2.0) == 0.5
    pl = DiscretePowerLaw4()
    assert cdf(pl, 0.0) == pytest.approx(0.5, abs=1e-12)
    assert cdf_strict(pl, 0.0) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("d", ALL, ids=repr)
@given(ts=st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=30))
def test_cdf_monotone_and_strict_below(d, ts):
    t = np.sort(np.array(ts))
    F, Fs = cdf(d, t), cdf_strict(d, t)
    assert np.all(np.diff(F) >= 0) and np.all((F >= 0) & (F <= 1))
    assert np.all(Fs <= F + 1e-15)
    if not d.discrete:
        np.testing.assert_array_equal(F, Fs)


@pytest.mark.parametrize("d", ALL, ids=repr)
def test_quantile_cdf_consistency(d):
    u = np.linspace(0.001, 0.999, 257)
    q = d.quantile(u)
    assert np.all(cdf(d, q) >= u - 1e-12)
    assert np.all(cdf_strict(d, q) <= u + 1e-12)


def test_powerlaw_total_mass():
    Z, bound = DiscretePowerLaw4.truncation(1e-12)
    assert bound < 1e-12
    assert bound == pytest.approx(30 / (math.pi**4 * Z**3))
    z = np.arange(1, Z + 1, dtype=float)
    head = 2 * PL4_CONST * math.fsum(z**-4.0)
    assert abs(head + 2 * DiscretePowerLaw4.upper_tail(Z + 1) - 1) < 1e-12
    assert abs(head + bound - 1) < 1e-12 + bound


def test_powerlaw_sampling_frequency():
    m = ModelSpec(1000, 1000, (DiscretePowerLaw4(),), Periodic(((0,),)))
    X = sample_matrix(m, 5)
    frac = np.mean(np.abs(X) == 1)
    p1 = 90 / math.pi**4
    assert abs(frac - p1) < 3 * math.sqrt(p1 * (1 - p1) / X.size)


def test_finite_pmf_validation():
    with pytest.raises(ValueError):
        FinitePMF((1.0, 1.0), (0.5, 0.5))
    with pytest.raises(ValueError):
        FinitePMF((0.0, 1.0), (0.5, 0.6))
    with pytest.raises(ValueError):
        Normal(0, 0)
    with pytest.raises(ValueError):
        Cauchy(0, -1)


@pytest.mark.parametrize("d", ALL, ids=repr)
def test_expect_normalisation(d):
    assert expect(d, lambda x: np.ones_like(np.asarray(x, float))) == pytest.approx(1, abs=1e-9)


def test_expect_examples():
    d = FinitePMF((-2.0, 2.0), (0.5, 0.5))
    assert expect(d, lambda x: np.clip(x, -1, 1)) == 0
    N = Normal(0, 1)
    g = lambda x: 2 * cdf(N, x) - 1  # noqa: E731
    assert expect(N, g) == pytest.approx(0, abs=1e-9)
    closed = 2 / math.pi * math.asin(0.5)
    assert closed == pytest.approx(1 / 3, abs=1e-15)
    assert expect(N, lambda x: g(x) ** 2) == pytest.approx(1 / 3, abs=1e-9)


def test_expect_heavy_tail_bounded_integrand():
    # E[sign(X)] = 0 and E[F(X)] = 1/2 for Cauchy and t(1)
    for d in (Cauchy(0, 3), StudentT1()):
        assert expect(d, np.sign) == pytest.approx(0, abs=1e-9)
        assert expect(d, lambda x: cdf(d, x)) == pytest.approx(0.5, abs=1e-9)
    val, err = expect_with_error(DiscretePowerLaw4(), lambda x: np.abs(np.sign(x)))
    assert val == pytest.approx(1, abs=1e-12) and err < 1e-12


def test_expect_rejects_unbounded():
    with pytest.raises(ValueError):
        expect(Cauchy(0, 1), lambda x: x)
    with pytest.raises(ValueError):
        expect(DiscretePowerLaw4(), lambda x: x**2)


@pytest.mark.parametrize("d", ALL, ids=repr)
def test_json_roundtrip(d):
    assert from_json(d.to_json()) == d
