import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from tailix.errors import NonMonotoneTail
from tailix.sample import empirical_tail, sort_sample
from tailix.sampling import (
    GOLDEN,
    MASK64,
    HallTailModel,
    ParetoModel,
    RngStream,
    derive_seed,
    exponential_from_uniform,
    floor_log_exponent,
    hall_inverse_tail,
    pareto_inverse_cdf,
    renyi_exponential_order_stats,
    renyi_upper,
    sample_exponential,
    sample_floor_log,
    sample_hall,
    sample_pareto,
    uniform01,
)
from tailix.stats import ks_critical, ks_two_sample


def reference_splitmix(seed, stream_id, count):
    """Scalar pure-int SplitMix64, written from the module docs."""

    def mix(z):
        z &= MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    key = mix(seed ^ mix(stream_id + GOLDEN))
    out = []
    for i in range(count):
        w = mix(key + GOLDEN * (i + 1))
        out.append(((w >> 11) + 0.5) * 2.0 ** -53)
    return out


class TestUniform:
    def test_matches_scalar_reference(self):
        for seed, sid in [(0, 0), (1, 5), (2 ** 63 + 11, 2 ** 40)]:
            assert uniform01(RngStream(seed, sid), 50).tolist() == reference_splitmix(seed, sid, 50)

    def test_frozen_values(self):
        assert uniform01(RngStream(0, 0), 3).tolist() == [0.3380524541955055, 0.26913027122639993, 0.271566609696784]
        assert uniform01(RngStream(0, 1), 3).tolist() == [0.43274492759272126, 0.42563217802862946, 0.5396686375601871]

    def test_deterministic_and_continues(self):
        a = uniform01(RngStream(9, 2), 10)
        s = RngStream(9, 2)
        b = np.concatenate([uniform01(s, 4), uniform01(s, 6)])
        assert a.tolist() == b.tolist()
        assert s.position == 10

    def test_open_interval_and_mean(self):
        u = uniform01(RngStream(11, 0), 1_000_000)
        assert u.min() > 0 and u.max() < 1
        assert abs(u.mean() - 0.5) <= 0.002

    def test_count_validation(self):
        with pytest.raises(ValueError):
            uniform01(RngStream(0), 0)

    def test_derive_seed(self):
        assert derive_seed(5, 1) != derive_seed(5, 2)
        assert derive_seed(5, 1, 2) == derive_seed(5, 1, 2)
        assert derive_seed(5) == 5


class TestPareto:
    def test_inverse_cdf_values(self):
        assert pareto_inverse_cdf(0.0, ParetoModel(2.0, 4.0)) == 2.0
        assert pareto_inverse_cdf(0.99, ParetoModel(1.0, 1.0)) == pytest.approx(100.0, rel=1e-13)

    @pytest.mark.parametrize("u", [0.0, 0.5, 0.9, 0.999])
    @pytest.mark.parametrize("alpha,C", [(0.1, 0.1), (1.0, 1.0), (1.5, 10.0)])
    def test_roundtrip(self, u, alpha, C):
        m = ParetoModel(alpha, C)
        x = pareto_inverse_cdf(u, m)
        assert abs((1 - C * x ** -alpha) - u) <= 1e-12

    def test_inverse_rejects_one(self):
        with pytest.raises(ValueError):
            pareto_inverse_cdf(1.0, ParetoModel(1.0))

    @given(st.floats(0, 0.999999), st.floats(0, 0.999999))
    def test_monotone(self, u1, u2):
        m = ParetoModel(1.3, 2.0)
        if u1 < u2:
            assert pareto_inverse_cdf(u1, m) <= pareto_inverse_cdf(u2, m)

    def test_sample_support_and_tail(self):
        m = ParetoModel(1.0, 1.0)
        raw = sample_pareto(100_000, m, RngStream(21, 0))
        assert raw.values.min() >= m.support_lower
        assert abs(empirical_tail(sort_sample(raw), 10.0) - 0.1) <= 0.01
        again = sample_pareto(100_000, m, RngStream(21, 0))
        assert raw.values.tolist() == again.values.tolist()

    @pytest.mark.parametrize("alpha,C", [(0.1, 10.0), (1.5, 0.1), (1.0, 10.0)])
    def test_support_bound(self, alpha, C):
        m = ParetoModel(alpha, C)
        raw = sample_pareto(5000, m, RngStream(1, 2))
        assert raw.values.min() >= C ** (1 / alpha)


class TestHall:
    def test_zero_perturbation_is_pareto(self):
        m = HallTailModel(1.3, 2.0, 0.7)
        a = sample_hall(1000, m, RngStream(4, 4)).values
        b = sample_pareto(1000, ParetoModel(1.3, 2.0), RngStream(4, 4)).values
        assert a.tobytes() == b.tobytes()

    def test_tail_formula(self):
        m = HallTailModel(1.0, 1.0, 1.0, coefficient=0.5, margin=0.0)
        assert m.tail(2.0) == pytest.approx(1.0 * 0.5 * 1.25, rel=1e-14)
        m2 = HallTailModel(1.0, 3.0, 1.0, coefficient=0.5)
        assert m2.tail(2.0) == pytest.approx(3.0 * 0.5 * (1 + 0.5 * 2.0 ** -1.1), rel=1e-14)

    @pytest.mark.parametrize("c", [0.5, 2.0, -0.3])
    def test_roundtrip_against_brentq(self, c):
        m = HallTailModel(1.2, 2.0, 0.8, coefficient=c)
        x0 = m.support_lower()
        assert m.tail(x0) == pytest.approx(1.0, abs=1e-10)
        v = np.array([0.9, 0.5, 1e-3, 1e-8])
        x = hall_inverse_tail(v, m)
        assert np.all(np.abs(m.tail(x) - v) <= 1e-10)
        for vi, xi in zip(v, x):
            ref = brentq(lambda t: m.tail(t) - vi, x0, 1e12, xtol=1e-14, rtol=1e-14)
            assert xi == pytest.approx(ref, rel=1e-10)

    def test_samples_above_support(self):
        m = HallTailModel(1.0, 1.0, 1.0, coefficient=0.5)
        raw = sample_hall(20_000, m, RngStream(8))
        assert raw.values.min() >= m.support_lower() * (1 - 1e-12)

    def test_non_monotone_rejected(self):
        # strongly negative c makes the tail rise above the bound; no decreasing branch reaches 1
        with pytest.raises(NonMonotoneTail):
            HallTailModel(1.0, 0.01, 1.0, coefficient=-50.0).check_monotone()

    def test_hall_tail_empirical(self):
        m = HallTailModel(1.0, 1.0, 1.0, coefficient=0.5)
        os = sort_sample(sample_hall(100_000, m, RngStream(12)))
        assert abs(empirical_tail(os, 10.0) - float(m.tail(10.0))) <= 0.01


class TestExponential:
    def test_inverse_transform(self):
        assert exponential_from_uniform(1 - math.exp(-1)) == pytest.approx(1.0, rel=1e-15)

    def test_mean(self):
        raw = sample_exponential(1_000_000, RngStream(13))
        assert abs(raw.values.mean() - 1.0) <= 0.01
        assert sample_exponential(5, RngStream(1)).values.tolist() == sample_exponential(5, RngStream(1)).values.tolist()

    def test_renyi_structure(self):
        s = RngStream(14)
        first = exponential_from_uniform(uniform01(RngStream(14), 1))[0]
        os = renyi_exponential_order_stats(50, s)
        assert os.sorted[0] == pytest.approx(first / 50, rel=1e-15)
        for seed in range(20):
            assert np.all(np.diff(renyi_exponential_order_stats(200, RngStream(seed)).sorted) >= 0)

    def test_renyi_upper_matches_vector(self):
        n, k = 1000, 31
        full = renyi_exponential_order_stats(n, RngStream(3, 3)).sorted[n - k - 1]
        assert renyi_upper(n, k, RngStream(3, 3)) == pytest.approx(full, rel=1e-12)

    def test_renyi_matches_sorted_exponentials(self):
        n, k, R = 1000, 31, 2000
        renyi = [renyi_upper(n, k, RngStream(101, r)) for r in range(R)]
        direct = [sort_sample(sample_exponential(n, RngStream(202, r))).sorted[n - k - 1] for r in range(R)]
        assert ks_two_sample(renyi, direct) <= min(0.05, ks_critical(R, 0.01, R))


class TestFloorLog:
    def test_ceiling(self):
        assert floor_log_exponent(math.exp(-2.5)) == 3
        assert floor_log_exponent(0.5) == 1
        assert floor_log_exponent(0.999) == 1

    def test_values_on_lattice(self):
        x = sample_floor_log(10_000, RngStream(15)).values
        m = np.log(x)
        assert np.allclose(m, np.round(m), atol=1e-12) and m.min() >= 1

    def test_tail_probability(self):
        x = sample_floor_log(1_000_000, RngStream(16)).values
        assert abs(np.mean(x > math.exp(2) * (1 + 1e-9)) - math.exp(-2)) <= 0.002
