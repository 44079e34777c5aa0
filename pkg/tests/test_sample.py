from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tailix.errors import IndexOutOfRange, KOutOfRange, NonPositiveValue
from tailix.sample import (
    OrderedSample,
    RawSample,
    empirical_tail,
    order_statistic,
    pareto_quantile_grid,
    sort_sample,
    upper_order_statistic,
)
from tailix.sampling import ParetoModel, RngStream, sample_pareto

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)


def test_sort_small():
    assert sort_sample([3, 1, 2]).sorted.tolist() == [1, 2, 3]
    assert sort_sample([5, 5, 5]).sorted.tolist() == [5, 5, 5]


def test_sort_preserves_multiset_of_pareto_draws():
    raw = sample_pareto(100_000, ParetoModel(1.0, 1.0), RngStream(3, 0))
    os = sort_sample(raw)
    assert Counter(raw.values.tolist()) == Counter(os.sorted.tolist())
    assert np.all(np.diff(os.sorted) >= 0)


@pytest.mark.parametrize("bad", [[1.0, 0.0], [2.0, -1.0], [1.0, float("nan")]])
def test_non_positive_rejected(bad):
    with pytest.raises(NonPositiveValue):
        sort_sample(bad)


def test_containers_are_read_only():
    os = sort_sample([2.0, 1.0])
    with pytest.raises(ValueError):
        os.sorted[0] = 5.0
    with pytest.raises(ValueError):
        OrderedSample([2.0, 1.0])
    with pytest.raises(ValueError):
        RawSample([1.0])


def test_order_statistic():
    os = sort_sample([1, 2, 3])
    assert order_statistic(os, 3) == 3
    assert order_statistic(os, 1) == 1
    for i in (0, 4):
        with pytest.raises(IndexOutOfRange):
            order_statistic(os, i)


def test_order_statistic_on_quantile_grid():
    # X_{n-k:n} with n=100, k=4 is (100/4)^(1/2)
    os = pareto_quantile_grid(100, 2.0)
    assert order_statistic(os, 96) == 5.0
    assert upper_order_statistic(os, 4) == 5.0
    with pytest.raises(KOutOfRange):
        upper_order_statistic(os, 100)


def test_empirical_tail():
    os = sort_sample([1, 2, 3, 4])
    assert empirical_tail(os, 2.5) == 0.5
    assert empirical_tail(os, 4.0) == 0.0
    assert empirical_tail(os, 10.0) == 0.0
    assert empirical_tail(os, 0.5) == 1.0


@given(st.lists(positive, min_size=2, max_size=60, unique=True), st.data())
def test_empirical_tail_at_upper_order_statistic(values, data):
    os = sort_sample(values)
    k = data.draw(st.integers(1, os.n - 1))
    assert empirical_tail(os, order_statistic(os, os.n - k)) == k / os.n


@given(st.lists(positive, min_size=2, max_size=60))
def test_sort_idempotent_and_extremes(values):
    os = sort_sample(values)
    again = sort_sample(os.sorted)
    assert again.sorted.tolist() == os.sorted.tolist()
    assert order_statistic(os, os.n) == max(values)
    assert order_statistic(os, 1) == min(values)


@pytest.mark.parametrize("n", [2, 3, 100, 1000])
def test_quantile_grid_has_k_values_above(n):
    os = pareto_quantile_grid(n, 1.5)
    for k in {1, n // 2 or 1, n - 1}:
        assert empirical_tail(os, upper_order_statistic(os, k)) == k / n
