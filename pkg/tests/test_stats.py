import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from tailix.stats import ks_critical, ks_distance, ks_two_sample, normal_cdf


def test_normal_cdf_points():
    assert normal_cdf(0.0) == 0.5
    assert abs(normal_cdf(10.0) - 1.0) <= 1e-7
    # 30-digit mpmath value
    assert abs(normal_cdf(1.96) - 0.975002104851779563787) <= 1e-7


@given(st.floats(-8, 8))
def test_normal_cdf_against_mpmath(z):
    assert abs(normal_cdf(z) - float(mpmath.ncdf(z))) <= 1e-7


def test_normal_cdf_vectorised():
    z = np.linspace(-5, 5, 11)
    assert np.allclose(normal_cdf(z), [normal_cdf(float(v)) for v in z], atol=0, rtol=1e-15)


def test_ks_on_plotting_positions():
    m = 1000
    x = sps.norm.ppf((np.arange(1, m + 1) - 0.5) / m)
    assert ks_distance(x) <= 0.0005 + 1 / (2 * m)


def test_ks_single_median():
    assert ks_distance([0.0]) == 0.5


def test_ks_scale_mismatch():
    rng = np.random.default_rng(0)
    x = rng.normal(0, 2, 20_000)
    # sup |Phi(x) - Phi(x/2)| is about 0.1587 - 0.0...; analytic value ~0.1658 at |x|=1.36
    assert ks_distance(x, 0, 1) > 0.08


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=80), st.floats(-2, 2), st.floats(0.1, 5))
def test_ks_against_scipy(xs, loc, scale):
    ref = sps.kstest(xs, "norm", args=(loc, scale)).statistic
    assert ks_distance(xs, loc, scale) == pytest.approx(ref, abs=1e-12)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=50), st.lists(st.floats(-5, 5), min_size=1, max_size=50))
def test_two_sample_against_scipy(a, b):
    assert ks_two_sample(a, b) == pytest.approx(sps.ks_2samp(a, b).statistic, abs=1e-12)


def test_critical_values():
    assert ks_critical(2000, 0.01) == pytest.approx(1.6276 / math.sqrt(2000), rel=1e-3)
    assert ks_critical(2000, 0.01, 2000) == pytest.approx(1.6276 * math.sqrt(2 / 2000), rel=1e-3)
    with pytest.raises(ValueError):
        ks_distance([1.0], scale=0)
