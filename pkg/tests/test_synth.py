import math

import numpy as np
import pytest

from spenra.errors import AmbiguousState, NoEvents
from spenra.series import summary_stats
from spenra.synth import (
    FireParams,
    Markov2Params,
    OdeSpec,
    concatenate,
    gen_chaotic_iei,
    gen_markov2,
    integrate_and_fire,
    integrate_ode,
    markov2_true_specific_entropy,
)


class TestMarkov2:
    def test_degenerate_run_state(self):
        params = Markov2Params(p_plus=0.999999, sigma_run=1e-9)
        s = gen_markov2(params, 50, seed=0, init=(1.0, 1.0))
        assert np.allclose(s.values, 5.0, atol=1e-6)

    def test_seed_determinism(self):
        a = gen_markov2(Markov2Params(), 500, seed=42)
        b = gen_markov2(Markov2Params(), 500, seed=42)
        assert np.array_equal(a.values, b.values)

    def test_conditional_mean_after_positive_runs(self):
        # law of large numbers: values after (+,+) pasts have mean
        # 0.1*5 + 0.9*(-5) = -4.0
        s = gen_markov2(Markov2Params(), 10**5, seed=1)
        x = s.values
        after_pp = x[2:][(x[:-2] > 0) & (x[1:-1] > 0)]
        assert after_pp.mean() == pytest.approx(-4.0, abs=0.05)

    def test_quadrant_moments(self):
        # within-quadrant sample mean/std converge to the mixture moments
        s = gen_markov2(Markov2Params(), 10**5, seed=2)
        x = s.values
        mixed = x[2:][(x[:-2] > 0) != (x[1:-1] > 0)]
        n = mixed.size
        assert mixed.mean() == pytest.approx(0.0, abs=3 * 3.0 / math.sqrt(n))
        assert mixed.std(ddof=1) == pytest.approx(3.0, rel=0.02)

    def test_crossing_fraction_matches_long_run_oracle(self):
        # oracle: an independent long-run simulation pins the stationary
        # frequency of mixed-sign consecutive pairs
        def mixed_fraction(seed, T):
            x = gen_markov2(Markov2Params(), T, seed=seed).values
            return np.mean((x[:-1] > 0) != (x[1:] > 0))

        oracle = mixed_fraction(seed=100, T=4 * 10**5)
        got = mixed_fraction(seed=3, T=10**5)
        assert got == pytest.approx(oracle, abs=0.01)

    def test_true_entropy_values(self):
        params = Markov2Params()
        assert markov2_true_specific_entropy(params, (1.0, 2.0)) == pytest.approx(
            1.744, abs=1e-3
        )
        assert markov2_true_specific_entropy(params, (-1.0, -2.0)) == pytest.approx(
            1.744, abs=1e-3
        )
        assert markov2_true_specific_entropy(params, (1.0, -2.0)) == pytest.approx(
            0.5 * math.log(2 * math.pi * math.e * 9.0), abs=1e-6
        )

    def test_true_entropy_unit_cross_sigma(self):
        params = Markov2Params(sigma_cross=1.0)
        assert markov2_true_specific_entropy(params, (1.0, -1.0)) == pytest.approx(
            0.5 * math.log(2 * math.pi * math.e), abs=1e-6
        )

    def test_zero_past_is_ambiguous_for_truth_but_not_generation(self):
        with pytest.raises(AmbiguousState):
            markov2_true_specific_entropy(Markov2Params(), (0.0, 1.0))
        s = gen_markov2(Markov2Params(), 10, seed=0, init=(0.0, 1.0))
        assert len(s) == 10


class TestOde:
    def test_lorenz_stays_on_attractor(self):
        spec = OdeSpec("lorenz")
        _, states = integrate_ode(spec, 200.0)
        assert np.all(np.abs(states[:, 0]) <= 25)
        assert np.all(np.abs(states[:, 1]) <= 35)
        assert np.all((states[:, 2] >= 0) & (states[:, 2] <= 55))

    def test_rossler_oscillation_period(self):
        spec = OdeSpec("rossler")
        times, states = integrate_ode(spec, 300.0)
        x = states[:, 0]
        peaks = times[1:-1][(x[1:-1] > x[:-2]) & (x[1:-1] > x[2:])]
        spacing = np.diff(peaks)
        assert abs(np.median(spacing) - 6.0) <= 1.0

    def test_rk4_matches_reference_integrator(self):
        # short horizon, no burn-in: fixed-step RK4 should track a
        # tight-tolerance adaptive reference before chaos amplifies error
        from scipy.integrate import solve_ivp

        def rhs(_, s):
            x, y, z = s
            return [10.0 * (y - x), x * (28.0 - z) - y, x * y - (8.0 / 3.0) * z]

        errs = {}
        for dt in (0.01, 0.005):
            times, states = integrate_ode(OdeSpec("lorenz", burn_in=0.0, dt=dt), 1.0)
            ref = solve_ivp(
                rhs, (times[0], times[-1]), states[0], t_eval=times,
                rtol=1e-12, atol=1e-12,
            )
            errs[dt] = np.max(np.abs(states - ref.y.T))
        assert errs[0.01] < 2e-3
        # fourth-order method: halving dt shrinks error by about 16x
        assert 10 < errs[0.01] / errs[0.005] < 24


class TestIntegrateAndFire:
    def test_constant_signal_closed_form(self):
        times = np.linspace(0, 100, 10001)
        states = np.zeros((10001, 3))
        states[:, 0] = 1.0  # S = (1+2)^2 = 9
        s = integrate_and_fire((times, states), FireParams(theta=4.5))
        assert np.allclose(s.values, 0.5, atol=1e-12)

    def test_conservation_between_events(self):
        spec = OdeSpec("lorenz")
        times, states = integrate_ode(spec, 100.0)
        theta = 60.0
        s = integrate_and_fire((times, states), FireParams(theta))
        # re-integrate the trapezoid signal between consecutive events
        signal = (states[:, 0] + 2.0) ** 2
        cumulative = np.concatenate(
            ([0.0], np.cumsum(0.5 * (signal[1:] + signal[:-1]) * np.diff(times)))
        )
        at_events = np.interp(s.timestamps, times, cumulative)
        gaps = np.diff(np.concatenate(([0.0], at_events)))
        assert np.allclose(gaps, theta, atol=1e-6 * theta)

    def test_event_monotonicity(self):
        s = gen_chaotic_iei("lorenz", 200, seed=0)
        assert np.all(np.diff(s.timestamps) > 0)
        assert np.all(s.values > 0)

    def test_no_events(self):
        times = np.linspace(0, 1, 11)
        states = np.zeros((11, 3))
        with pytest.raises(NoEvents):
            integrate_and_fire((times, states), FireParams(theta=1e9))

    def test_lorenz_iei_statistics(self):
        s = gen_chaotic_iei("lorenz", 1000, seed=7)
        mean, std, _, _ = summary_stats(s)
        assert mean == pytest.approx(0.90, abs=0.05)
        assert std == pytest.approx(0.39, abs=0.05)

    def test_rossler_iei_statistics(self):
        s = gen_chaotic_iei("rossler", 1000, seed=7)
        mean, std, _, _ = summary_stats(s)
        assert mean == pytest.approx(0.88, abs=0.05)
        assert std == pytest.approx(0.73, abs=0.07)


class TestConcatenate:
    def test_two_singletons(self):
        from spenra.series import Series

        out = concatenate([Series([2.0]), Series([3.0])])
        assert np.array_equal(out.values, [2.0, 3.0])
        assert np.array_equal(out.timestamps, [2.0, 5.0])

    def test_identity_on_single_series(self):
        s = gen_chaotic_iei("lorenz", 50, seed=1)
        out = concatenate([s])
        assert np.array_equal(out.values, s.values)

    def test_benchmark_length(self):
        parts = [
            gen_chaotic_iei("lorenz", 500, seed=0),
            gen_chaotic_iei("rossler", 500, seed=1),
            gen_chaotic_iei("lorenz", 500, seed=2),
        ]
        out = concatenate(parts)
        assert len(out) == 1500
        assert "boundaries=1,501,1001" in out.label
