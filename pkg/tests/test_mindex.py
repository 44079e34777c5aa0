import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tailix.errors import DomainError
from tailix.mindex import (
    MFunction,
    builtin,
    check_sandwich,
    default_grid,
    estimate_m_index,
    floor_log_grid,
    log_log_ratio,
)

GRID = default_grid()


def test_log_log_ratio_values():
    f = MFunction("x^1.7", func=lambda x: x ** 1.7)
    assert log_log_ratio(f, 123.0) == pytest.approx(1.7, abs=1e-15)
    g = MFunction("x^2 log x", func=lambda x: x * x * math.log(x))
    assert log_log_ratio(g, math.exp(10)) == pytest.approx((20 + math.log(10)) / 10, abs=1e-12)
    fl = builtin("floor-log")
    for m in range(1, 41):
        assert log_log_ratio(fl, math.exp(m)) == -1.0


def test_domain_errors():
    f = MFunction("x", func=lambda x: x)
    with pytest.raises(DomainError):
        log_log_ratio(f, 1.0)
    with pytest.raises(DomainError):
        log_log_ratio(MFunction("neg", func=lambda x: -x), 5.0)
    with pytest.raises(DomainError):
        estimate_m_index(f, [2, 3, 4])
    with pytest.raises(DomainError):
        estimate_m_index(f, np.geomspace(0.5, 100, 10))
    with pytest.raises(ValueError):
        MFunction("both", func=abs, log_func=abs)


def test_scaled_power():
    d = estimate_m_index(MFunction("5x^1.5", func=lambda x: 5 * x ** 1.5), GRID)
    # ratio = 1.5 + log 5 / log x
    assert abs(d.estimated_index - 1.5) <= math.log(5) / math.log(1e12) + 1e-12
    expected_dev = math.log(5) / math.log(GRID[24]) - math.log(5) / math.log(GRID[-1])
    assert d.max_deviation_tail == pytest.approx(expected_dev, rel=1e-9)
    assert d.extrapolated_index == pytest.approx(1.5, abs=0.01)
    assert not d.drifting


def test_oscillating_envelope():
    d = estimate_m_index(builtin("oscillating", -1.0), GRID)
    assert d.max_deviation_tail <= math.log(3) / math.log(GRID[24])
    assert abs(d.estimated_index + 1) <= math.log(3) / math.log(GRID[-1])


def test_exponential_drifts():
    d = estimate_m_index(builtin("exp"), GRID)
    assert d.drifting
    assert not estimate_m_index(builtin("power-log", 2.0), GRID).drifting
    assert not estimate_m_index(builtin("power", 1.5), GRID).drifting


def test_floor_log_on_lattice():
    d = estimate_m_index(builtin("floor-log"), floor_log_grid())
    assert d.estimated_index == -1.0
    assert np.all(d.ratios == -1.0)


def test_log_func_handles_huge_indices():
    f = MFunction("x^300", log_func=lambda x: 300 * math.log(x))
    assert estimate_m_index(f, GRID).estimated_index == pytest.approx(300, rel=1e-14)


def test_sandwich_examples():
    assert check_sandwich(builtin("power", 2.0), 2.0, 0.5, GRID).consistent
    wrong = check_sandwich(builtin("power", 2.0), 3.0, 0.5, GRID)
    assert wrong.upper_to_zero and not wrong.lower_to_infinity and not wrong.consistent
    lattice = np.exp(np.arange(1.5, 41.0, 1.0))
    fl = check_sandwich(builtin("floor-log"), -1.0, 0.2, lattice)
    assert fl.consistent and fl.upper_monotone and fl.lower_monotone
    assert check_sandwich(builtin("oscillating", -1.0), -1.0, 0.5, GRID).consistent
    with pytest.raises(ValueError):
        check_sandwich(builtin("power"), 1.0, 0.0, GRID)


@given(st.floats(-20, 20), st.floats(0.01, 100))
def test_pure_power_index(eta, a):
    f = MFunction("a x^eta", log_func=lambda x: math.log(a) + eta * math.log(x))
    d = estimate_m_index(f, GRID)
    assert abs(d.estimated_index - eta) <= abs(math.log(a)) / math.log(GRID[-1]) + 1e-9
    for x, r in zip(d.grid[::7], d.ratios[::7]):
        assert r == pytest.approx(log_log_ratio(f, float(x)), abs=1e-12)


@given(st.floats(-10, 10), st.sampled_from([-1.0, 1.0]))
def test_sandwich_rejects_other_index(eta, shift):
    f = MFunction("x^eta", log_func=lambda x: eta * math.log(x))
    assert check_sandwich(f, eta, 0.5, GRID).consistent
    assert not check_sandwich(f, eta + shift, 0.5, GRID).consistent
