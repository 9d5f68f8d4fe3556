"""Ground-truth synthetic generators.

A quadrant-switching second-order Markov process with exactly computable
per-state entropy rates, fixed-step RK4 integrators for the Lorenz and
Rossler systems, an integrate-and-fire event extractor mapping a
trajectory to interevent intervals, and IEI-sequence concatenation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ckde import PredictiveSlice
from .errors import AmbiguousState, NoEvents, NonFiniteState
from .quadrature import adaptive_gk
from .series import Series

DEFAULT_DT = 0.01
DEFAULT_BURN_IN = 100.0
LORENZ_THETA = 60.0
ROSSLER_THETA = 125.0


@dataclass(frozen=True)
class Markov2Params:
    """Quadrant-switching transition density parameters.

    Same-sign-positive pasts draw from p_plus*N(mu,s^2)+(1-p_plus)*N(-mu,s^2)
    with s = sigma_run; same-sign-negative mirrors with p_minus; mixed-sign
    pasts draw from N(0, sigma_cross^2).
    """

    p_plus: float = 0.1
    p_minus: float = 0.1
    mu: float = 5.0
    sigma_run: float = 1.0
    sigma_cross: float = 3.0

    def __post_init__(self):
        if not (0.0 < self.p_plus < 1.0 and 0.0 < self.p_minus < 1.0):
            raise ValueError("switch probabilities must lie in (0, 1)")
        if self.sigma_run <= 0 or self.sigma_cross <= 0 or self.mu <= 0:
            raise ValueError("mu and sigmas must be positive")


@dataclass(frozen=True)
class OdeSpec:
    """Chaotic-system integration setup (fixed-step RK4)."""

    system: str  # "lorenz" | "rossler"
    params: tuple = None
    initial_state: tuple = (1.0, 1.0, 1.0)
    dt: float = DEFAULT_DT
    burn_in: float = DEFAULT_BURN_IN

    def __post_init__(self):
        if self.system not in ("lorenz", "rossler"):
            raise ValueError("system must be 'lorenz' or 'rossler'")
        if self.params is None:
            canonical = {"lorenz": (10.0, 8.0 / 3.0, 28.0),
                         "rossler": (0.1, 0.1, 14.0)}
            object.__setattr__(self, "params", canonical[self.system])
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if not np.all(np.isfinite(self.params)):
            raise ValueError("parameters must be finite")


@dataclass(frozen=True)
class FireParams:
    """Integrate-and-fire threshold and event budget."""

    theta: float
    max_events: int = 10_000

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError("theta must be positive")
        if self.max_events < 1:
            raise ValueError("max_events must be positive")


def _state_of(past_pair) -> str:
    a, b = float(past_pair[0]), float(past_pair[1])
    if a > 0 and b > 0:
        return "positive"
    if a < 0 and b < 0:
        return "negative"
    if a == 0 or b == 0:
        return "zero"
    return "mixed"


def gen_markov2(params: Markov2Params, T: int, seed: int,
                init=(1.0, 1.0)) -> Series:
    """Sample T values from the quadrant-switching Markov process.

    ``init`` supplies the two values preceding the first sample; a past
    value of exactly 0 (only reachable through ``init``) is treated as
    mixed-sign. Deterministic given seed.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    rng = np.random.default_rng(seed)
    x_prev2, x_prev1 = float(init[0]), float(init[1])
    out = np.empty(T)
    for t in range(T):
        state = _state_of((x_prev2, x_prev1))
        if state == "positive":
            sign = 1.0 if rng.random() < params.p_plus else -1.0
            x = sign * params.mu + params.sigma_run * rng.standard_normal()
        elif state == "negative":
            sign = -1.0 if rng.random() < params.p_minus else 1.0
            x = sign * params.mu + params.sigma_run * rng.standard_normal()
        else:  # mixed or zero: the crossing state
            x = params.sigma_cross * rng.standard_normal()
        out[t] = x
        x_prev2, x_prev1 = x_prev1, x
    return Series(out, label=f"markov2 seed={seed}")


def markov2_transition_mixture(params: Markov2Params, past) -> PredictiveSlice:
    """Exact transition density for a past pair, as a Gaussian mixture."""
    state = _state_of(past)
    if state == "zero":
        raise AmbiguousState("sign of a zero past value is undefined")
    if state == "positive":
        return PredictiveSlice(
            np.array([params.p_plus, 1.0 - params.p_plus]),
            np.array([params.mu, -params.mu]), params.sigma_run)
    if state == "negative":
        return PredictiveSlice(
            np.array([params.p_minus, 1.0 - params.p_minus]),
            np.array([-params.mu, params.mu]), params.sigma_run)
    return PredictiveSlice(np.array([1.0]), np.array([0.0]), params.sigma_cross)


def markov2_true_specific_entropy(params: Markov2Params, past,
                                  abs_tol: float = 1e-9) -> float:
    """Exact specific entropy rate of the quadrant's transition mixture.

    Computed by quadrature of -f log f; errors on a past containing an
    exact zero, whose sign-state is undefined.
    """
    mix = markov2_transition_mixture(params, past)
    k = mix.future_bandwidth
    lo = float(mix.centers.min() - 10.0 * k)
    hi = float(mix.centers.max() + 10.0 * k)

    def integrand(y):
        logf = mix.log_density(y)
        with np.errstate(under="ignore"):
            f = np.exp(logf)
        return np.where(f > 0.0, -f * logf, 0.0)

    return adaptive_gk(integrand, lo, hi, abs_tol, breakpoints=mix.centers)


def _make_rhs(spec: OdeSpec):
    if spec.system == "lorenz":
        sigma, beta, rho = spec.params

        def rhs(x, y, z):
            return sigma * (y - x), x * (rho - z) - y, x * y - beta * z
    else:
        a, b, c = spec.params

        def rhs(x, y, z):
            return -y - z, x + a * y, b + z * (x - c)
    return rhs


def integrate_ode(spec: OdeSpec, duration: float) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step RK4 trajectory over ``duration`` time units past burn-in.

    Returns (times, states) with times starting at 0 after the discarded
    burn-in segment. Raises NonFiniteState on blow-up.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    rhs = _make_rhs(spec)
    dt = spec.dt
    n_burn = int(round(spec.burn_in / dt))
    n_keep = int(round(duration / dt))
    x, y, z = (float(v) for v in spec.initial_state)
    states = np.empty((n_keep + 1, 3))
    if n_burn == 0:
        states[0] = (x, y, z)
    half = 0.5 * dt
    sixth = dt / 6.0
    for i in range(n_burn + n_keep):
        ax, ay, az = rhs(x, y, z)
        bx, by, bz = rhs(x + half * ax, y + half * ay, z + half * az)
        cx, cy, cz = rhs(x + half * bx, y + half * by, z + half * bz)
        dx, dy, dz = rhs(x + dt * cx, y + dt * cy, z + dt * cz)
        x += sixth * (ax + 2.0 * bx + 2.0 * cx + dx)
        y += sixth * (ay + 2.0 * by + 2.0 * cy + dy)
        z += sixth * (az + 2.0 * bz + 2.0 * cz + dz)
        j = i - n_burn + 1
        if 0 <= j <= n_keep:
            states[j] = (x, y, z)
    if not np.all(np.isfinite(states)):
        raise NonFiniteState("trajectory blew up (non-finite state)")
    times = dt * np.arange(n_keep + 1)
    return times, states


def squared_shifted_x(states: np.ndarray) -> np.ndarray:
    """The firing signal (x + 2)^2 along a trajectory."""
    return (states[:, 0] + 2.0) ** 2


_SIGNALS = {"squared-shifted-x": squared_shifted_x}


def integrate_and_fire(trajectory: tuple[np.ndarray, np.ndarray],
                       fire: FireParams,
                       signal: str = "squared-shifted-x") -> Series:
    """Emit events whenever the running trapezoid integral of S reaches theta.

    Crossing times are located by linear interpolation of the accumulated
    integral within a step; the integral resets by theta at each event, so
    several events can fall inside one step. Returns the interevent
    intervals with the event times as timestamps.
    """
    times, states = trajectory
    if len(times) == 0:
        raise NoEvents("empty trajectory")
    S = _SIGNALS[signal](states)
    if np.any(S < 0):
        raise ValueError("signal must be nonnegative along the trajectory")
    theta = fire.theta
    acc = 0.0
    event_times = []
    for i in range(len(times) - 1):
        dt = times[i + 1] - times[i]
        increment = 0.5 * (S[i] + S[i + 1]) * dt
        t_lo, dt_left = times[i], dt
        while increment > 0 and acc + increment >= theta \
                and len(event_times) < fire.max_events:
            consumed = theta - acc
            frac = consumed / increment
            t_lo += dt_left * frac
            event_times.append(t_lo)
            dt_left *= 1.0 - frac
            increment -= consumed
            acc = 0.0
        acc += increment
        if len(event_times) >= fire.max_events:
            break
    if not event_times:
        raise NoEvents(f"integrated signal never reached theta={theta}")
    event_times = np.asarray(event_times)
    ieis = np.diff(np.concatenate(([0.0], event_times)))
    return Series(ieis, timestamps=event_times, label="integrate-and-fire IEIs")


def gen_chaotic_iei(system: str, n_events: int, seed: int,
                    theta: float | None = None, dt: float = DEFAULT_DT,
                    burn_in: float = DEFAULT_BURN_IN) -> Series:
    """Generate exactly ``n_events`` interevent intervals from a chaotic drive.

    The seed perturbs the initial condition (the dynamics themselves are
    deterministic), so different seeds sample different stretches of the
    attractor. The integration window grows until enough events fire.
    """
    if theta is None:
        theta = LORENZ_THETA if system == "lorenz" else ROSSLER_THETA
    rng = np.random.default_rng(seed)
    init = tuple(1.0 + 0.1 * rng.standard_normal(3))
    spec = OdeSpec(system, initial_state=init, dt=dt, burn_in=burn_in)
    duration = 1.5 * n_events  # mean IEI is order 1 au for both benchmarks
    for _ in range(8):
        traj = integrate_ode(spec, duration)
        s = integrate_and_fire(traj, FireParams(theta, max_events=n_events))
        if len(s) >= n_events:
            return Series(s.values[:n_events], s.timestamps[:n_events],
                          label=f"{system} IEI seed={seed} theta={theta}")
        duration *= 2.0
    raise NoEvents(f"could not collect {n_events} events from {system}")


def concatenate(series_list) -> Series:
    """Join IEI sequences; timestamps are rebuilt as cumulative interval sums.

    Segment boundary indices (1-based, first index of each segment) are
    recorded in the label.
    """
    if not series_list:
        raise ValueError("need at least one series")
    values = np.concatenate([s.values for s in series_list])
    boundaries = np.cumsum([0] + [len(s) for s in series_list[:-1]]) + 1
    label = "concat boundaries=" + ",".join(str(int(b)) for b in boundaries)
    return Series(values, timestamps=np.cumsum(values), label=label)
