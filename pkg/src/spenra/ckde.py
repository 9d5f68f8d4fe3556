"""Product-Gaussian-kernel conditional density estimation.

The predictive density f(x_t | x_{t-p}, ..., x_{t-1}) is estimated as the
ratio of a joint KDE over (past, future) to a marginal KDE over pasts.
Because both use the same past bandwidths, the ratio collapses to a
one-dimensional Gaussian mixture over the training futures whose weights
are the normalized past-kernel responsibilities. All weight arithmetic is
done in log space (log-sum-exp), so bandwidths spanning many decades are
safe.

Leave-out sets are expressed as sets of 1-based future indices
t in {p+1, ..., T}; the same evaluator therefore serves leave-one-out
({t}) and l-block cross-validation ({t-l, ..., t+l} clipped).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DegenerateWeights, EmptyAfterLeaveOut
from .series import HistoryBlock, Series, embed

LOG_2PI = float(np.log(2.0 * np.pi))

# unnormalized log-weights more than this far below the max carry no mass
LOG_WEIGHT_FLOOR = 700.0


def kernel_value(u: float) -> float:
    """Standard normal density (2*pi)^{-1/2} exp(-u^2/2); underflows to 0."""
    with np.errstate(under="ignore"):
        return float(np.exp(-0.5 * float(u) ** 2 - 0.5 * LOG_2PI))


@dataclass(frozen=True)
class ConditionalDensityModel:
    """A fitted product-kernel predictive density estimator.

    ``bandwidths`` has length p+1: entries 0..p-1 smooth the past lags
    (oldest to newest), entry p smooths the future.
    """

    training: Series
    order: int
    bandwidths: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.bandwidths, dtype=float)
        if k.ndim != 1 or k.size != self.order + 1:
            raise ValueError("bandwidths must have length order + 1")
        if not np.all(np.isfinite(k)) or np.any(k <= 0):
            raise ValueError("bandwidths must be strictly positive and finite")
        if self.order + 1 > len(self.training):
            raise ValueError("training series shorter than order + 1")
        object.__setattr__(self, "bandwidths", k)
        k.setflags(write=False)

    @property
    def past_bandwidths(self) -> np.ndarray:
        return self.bandwidths[:-1]

    @property
    def future_bandwidth(self) -> float:
        return float(self.bandwidths[-1])

    @property
    def n_blocks(self) -> int:
        return len(self.training) - self.order


@dataclass(frozen=True)
class PredictiveSlice:
    """The 1-d Gaussian mixture induced by conditioning on one past.

    ``weights`` sum to one; ``centers`` are the training futures that
    survived the leave-out set and any underflow pruning.
    """

    weights: np.ndarray
    centers: np.ndarray
    future_bandwidth: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        c = np.asarray(self.centers, dtype=float)
        if w.size < 1 or w.shape != c.shape:
            raise ValueError("weights and centers must be same nonempty length")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if not (np.isfinite(self.future_bandwidth) and self.future_bandwidth > 0):
            raise ValueError("future_bandwidth must be positive and finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "centers", c)
        w.setflags(write=False)
        c.setflags(write=False)

    def log_density(self, y) -> np.ndarray | float:
        """Log of the mixture density at scalar or vector y."""
        y_arr = np.atleast_1d(np.asarray(y, dtype=float))
        k = self.future_bandwidth
        z = (y_arr[:, None] - self.centers[None, :]) / k
        logphi = -0.5 * z * z - 0.5 * LOG_2PI - np.log(k)
        with np.errstate(divide="ignore"):
            out = logsumexp(logphi + np.log(self.weights)[None, :], axis=1)
        return out if np.ndim(y) else float(out[0])

    def density(self, y) -> np.ndarray | float:
        with np.errstate(under="ignore"):
            return np.exp(self.log_density(y))


def _retained_rows(m: ConditionalDensityModel, leave_out) -> np.ndarray:
    """Map a set of future indices to a boolean mask over training rows."""
    n = m.n_blocks
    keep = np.ones(n, dtype=bool)
    if leave_out:
        for t in leave_out:
            j = int(t) - (m.order + 1)
            if 0 <= j < n:
                keep[j] = False
    if not keep.any():
        raise EmptyAfterLeaveOut("leave-out set removed every training block")
    return keep


def _log_past_weights(m: ConditionalDensityModel, past: np.ndarray) -> np.ndarray:
    """Unnormalized log product-kernel weights of every training block."""
    pasts, _ = embed(m.training.values, m.order)
    k = m.past_bandwidths
    z = (past[None, :] - pasts) / k[None, :]
    return (-0.5 * z * z - 0.5 * LOG_2PI - np.log(k)[None, :]).sum(axis=1)


def _check_past(m: ConditionalDensityModel, past: HistoryBlock) -> np.ndarray:
    if past.order != m.order:
        raise ValueError(f"past has length {past.order}, model order is {m.order}")
    return past.past


def marginal_past_density(
    m: ConditionalDensityModel, past: HistoryBlock, leave_out=None
) -> float:
    """KDE of the past-block marginal at ``past``.

    The average runs over retained training blocks only; the denominator
    is the retained count.
    """
    x = _check_past(m, past)
    keep = _retained_rows(m, leave_out)
    lw = _log_past_weights(m, x)[keep]
    with np.errstate(under="ignore"):
        return float(np.exp(logsumexp(lw) - np.log(lw.size)))


def predictive_slice(
    m: ConditionalDensityModel, past: HistoryBlock, leave_out=None
) -> PredictiveSlice:
    """Condition the model on ``past``: a weighted mixture of future kernels.

    Weights are normalized in log space; components whose unnormalized
    log-weight is more than 700 below the maximum are dropped (they carry
    no double-precision mass).
    """
    x = _check_past(m, past)
    keep = _retained_rows(m, leave_out)
    _, futures = embed(m.training.values, m.order)
    lw = _log_past_weights(m, x)[keep]
    top = lw.max()
    if not np.isfinite(top):
        raise DegenerateWeights("all kernel weights underflowed; check bandwidths")
    alive = lw >= top - LOG_WEIGHT_FLOOR
    lw = lw[alive]
    with np.errstate(under="ignore"):
        w = np.exp(lw - logsumexp(lw))
    w = w / w.sum()
    return PredictiveSlice(w, futures[keep][alive], m.future_bandwidth)


def conditional_log_density(
    m: ConditionalDensityModel, past: HistoryBlock, future: float, leave_out=None
) -> float:
    """log f(future | past) under the model, computed fully in log space."""
    x = _check_past(m, past)
    keep = _retained_rows(m, leave_out)
    _, futures = embed(m.training.values, m.order)
    lw = _log_past_weights(m, x)[keep]
    if not np.isfinite(lw.max()):
        raise DegenerateWeights("all kernel weights underflowed; check bandwidths")
    k0 = m.future_bandwidth
    z = (float(future) - futures[keep]) / k0
    log_future_kernel = -0.5 * z * z - 0.5 * LOG_2PI - np.log(k0)
    return float(logsumexp(lw + log_future_kernel) - logsumexp(lw))
