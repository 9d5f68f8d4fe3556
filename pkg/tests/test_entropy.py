import math

import numpy as np
import pytest

from spenra.ckde import PredictiveSlice
from spenra.entropy import (
    EntropyRateSeries,
    bias_map,
    mixture_entropy,
    specific_entropy_series,
    time_averaged_rate,
    windowed_average,
    write_csv,
)
from spenra.errors import MissingTimestamps
from spenra.series import Series


def gaussian_entropy(sigma):
    return 0.5 * math.log(2.0 * math.pi * math.e * sigma**2)


def random_slice(rng, n_max=20):
    n = int(rng.integers(1, n_max))
    w = rng.random(n) + 0.05
    w /= w.sum()
    return PredictiveSlice(w, rng.uniform(-5, 5, n), float(rng.uniform(0.05, 2.0)))


def test_single_component_closed_form():
    for k in (0.1, 1.0, 3.0):
        sl = PredictiveSlice(np.array([1.0]), np.array([2.0]), k)
        assert mixture_entropy(sl, 1e-8) == pytest.approx(
            gaussian_entropy(k), abs=1e-8
        )


def test_markov_mixed_state_entropy():
    sl = PredictiveSlice(np.array([1.0]), np.array([0.0]), 3.0)
    assert mixture_entropy(sl, 1e-6) == pytest.approx(2.5176, abs=1e-3)


def test_markov_same_sign_mixture_entropy():
    # verified against a 1e7-sample Monte-Carlo oracle: 1.7438 +/- 0.0003
    sl = PredictiveSlice(np.array([0.1, 0.9]), np.array([5.0, -5.0]), 1.0)
    assert mixture_entropy(sl, 1e-6) == pytest.approx(1.744, abs=1e-3)


def test_quadrature_vs_monte_carlo():
    rng = np.random.default_rng(42)
    n_mc = 10**5
    for _ in range(50):
        sl = random_slice(rng)
        comp = rng.choice(sl.centers.size, size=n_mc, p=sl.weights)
        x = sl.centers[comp] + sl.future_bandwidth * rng.standard_normal(n_mc)
        logg = sl.log_density(x)
        mc = -logg.mean()
        se = logg.std(ddof=1) / math.sqrt(n_mc)
        quad = mixture_entropy(sl, 1e-6)
        assert abs(quad - mc) <= 3.0 * se + 1e-6


def test_entropy_at_least_component_entropy():
    # conditioning reduces entropy: h(mixture) >= h(single kernel)
    rng = np.random.default_rng(5)
    for _ in range(20):
        sl = random_slice(rng)
        assert mixture_entropy(sl, 1e-8) >= gaussian_entropy(
            sl.future_bandwidth
        ) - 1e-7


def test_constant_series_every_rate_is_gaussian():
    s = Series(np.full(20, 3.5))
    e = specific_entropy_series(s, 2, [0.4, 0.4, 0.4], abs_tol=1e-8)
    assert np.allclose(e.values, gaussian_entropy(0.4), atol=1e-7)
    assert np.array_equal(e.indices, np.arange(3, 21))


def test_translation_invariance_of_series():
    rng = np.random.default_rng(9)
    vals = rng.standard_normal(60)
    k = [0.3, 0.3, 0.25]
    e1 = specific_entropy_series(Series(vals), 2, k)
    e2 = specific_entropy_series(Series(vals + 11.2), 2, k)
    assert np.allclose(e1.values, e2.values, atol=1e-8)


def test_scale_law():
    rng = np.random.default_rng(10)
    vals = rng.standard_normal(60)
    k = np.array([0.3, 0.3, 0.25])
    a = 2.5
    e1 = specific_entropy_series(Series(vals), 2, k)
    e2 = specific_entropy_series(Series(vals * a), 2, k * a)
    assert np.allclose(e2.values - e1.values, math.log(a), atol=1e-6)


def test_time_averaged_rate_is_mean():
    e = EntropyRateSeries(np.array([2, 3, 4]), np.array([1.0, 2.0, 6.0]), 1,
                          np.array([0.1, 0.1]))
    assert time_averaged_rate(e) == pytest.approx(3.0)


def test_windowed_average_limits():
    times = np.array([0.0, 1.0, 3.0, 7.0])
    vals = np.array([1.0, 2.0, 3.0, 4.0])
    e = EntropyRateSeries(np.arange(2, 6), vals, 1, np.array([0.1, 0.1]),
                          times=times)
    # window wider than the whole span reproduces the global mean
    wide = windowed_average(e, 1e9)
    assert all(v == pytest.approx(vals.mean()) for _, v in wide)
    # window below the smallest gap is the identity
    narrow = windowed_average(e, 0.5)
    assert [v for _, v in narrow] == pytest.approx(list(vals))


def test_windowed_average_requires_times():
    e = EntropyRateSeries(np.array([2]), np.array([1.0]), 1, np.array([0.1, 0.1]))
    with pytest.raises(MissingTimestamps):
        windowed_average(e, 60.0)


def test_windowed_average_step_change():
    # step in the rates at time 50: the windowed curve crosses the midpoint
    # within window/2 of the step
    times = np.arange(100.0)
    vals = np.where(times < 50, 0.0, 2.0)
    e = EntropyRateSeries(np.arange(2, 102), vals, 1, np.array([0.1, 0.1]),
                          times=times)
    window = 20.0
    curve = windowed_average(e, window)
    crossing = next(t for t, v in curve if v >= 1.0)
    assert abs(crossing - 50.0) <= window / 2


def test_bias_map_self_test():
    rng = np.random.default_rng(12)
    s = Series(rng.standard_normal(40))
    k = [0.5, 0.4]
    est = specific_entropy_series(s, 1, k)
    lookup = dict(zip(est.indices.tolist(), est.values.tolist()))
    triples = bias_map(s, lambda hb: lookup[hb.origin_index], 1, k)
    assert all(abs(b) < 1e-12 for _, _, b in triples)
    assert len(triples) == 39


def test_write_csv(tmp_path):
    s = Series([1.0, 2.0, 3.0], timestamps=[0.5, 1.0, 2.0])
    e = specific_entropy_series(s, 1, [0.5, 0.5])
    path = tmp_path / "er.csv"
    write_csv(e, path, source=s, windowed=windowed_average(e, 1e9))
    text = path.read_text()
    assert text.startswith("t,time,value,h_specific,h_windowed\n")
    assert "# p=1\n" in text
    assert "# bandwidths=" in text
    assert "# time_averaged=" in text
