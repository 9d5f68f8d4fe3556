"""Specific entropy rate of the estimated predictive density.

The specific entropy rate at time t is the differential entropy of the
predictive density conditioned on the observed length-p past ending at
t-1, computed by numerical quadrature of -g log g for the conditional
Gaussian mixture g. All entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from . import _config
from .ckde import ConditionalDensityModel, HistoryBlock, PredictiveSlice, predictive_slice
from .errors import MissingTimestamps
from .quadrature import adaptive_gk
from .series import Series, embed

DEFAULT_ABS_TOL = 1e-6

# mixture components below this weight are dropped before quadrature;
# their entropy contribution is far below any practical abs_tol
_WEIGHT_PRUNE = 1e-14


@dataclass(frozen=True)
class EntropyRateSeries:
    """Per-time-index specific entropy rates with alignment metadata.

    ``indices`` are 1-based future times t = p+1..T; ``times`` are the
    matching event timestamps when the underlying series carries them.
    """

    indices: np.ndarray
    values: np.ndarray
    order: int
    bandwidths: np.ndarray
    times: np.ndarray | None = None

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        vals = np.asarray(self.values, dtype=float)
        if idx.shape != vals.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-d and same length")
        if idx.size > 1 and not np.all(np.diff(idx) > 0):
            raise ValueError("indices must be strictly increasing")
        if not np.all(np.isfinite(vals)):
            raise ValueError("entropy values must be finite")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "bandwidths", np.asarray(self.bandwidths, float))

    def __len__(self):
        return self.values.size


def mixture_entropy(slice_: PredictiveSlice, abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """Differential entropy -int g log g of the predictive mixture, in nats.

    Integration runs over [min(centers) - 8k, max(centers) + 8k] (Gaussian
    tail mass beyond 8 bandwidths is < 1e-15); the integrand is taken as 0
    wherever g underflows to 0.
    """
    keep = slice_.weights > _WEIGHT_PRUNE
    if keep.sum() < slice_.weights.size:
        w = slice_.weights[keep]
        slice_ = PredictiveSlice(w / w.sum(), slice_.centers[keep],
                                 slice_.future_bandwidth)
    k = slice_.future_bandwidth
    lo = float(slice_.centers.min() - 8.0 * k)
    hi = float(slice_.centers.max() + 8.0 * k)

    def integrand(y):
        logg = slice_.log_density(y)
        with np.errstate(under="ignore"):
            g = np.exp(logg)
        return np.where(g > 0.0, -g * logg, 0.0)

    centers = np.unique(slice_.centers)
    return adaptive_gk(integrand, lo, hi, abs_tol, breakpoints=centers)


def specific_entropy_series(
    s: Series, p: int, bandwidths, abs_tol: float = DEFAULT_ABS_TOL
) -> EntropyRateSeries:
    """Specific entropy rate at every observed past of order p.

    This is the plug-in estimator: the model is fit on the full sample and
    evaluated at each past with no leave-out (self-influence is part of
    the estimator). Per-t evaluations run in parallel; output order is
    fixed by t.
    """
    model = ConditionalDensityModel(s, p, np.asarray(bandwidths, float))
    pasts, _ = embed(s.values, p)
    n = pasts.shape[0]

    def one(j):
        sl = predictive_slice(model, HistoryBlock(pasts[j]))
        return mixture_entropy(sl, abs_tol)

    values = Parallel(n_jobs=_config.n_jobs(), prefer="threads")(
        delayed(one)(j) for j in range(n)
    )
    times = s.timestamps[p:] if s.timestamps is not None else None
    return EntropyRateSeries(
        indices=np.arange(p + 1, len(s) + 1),
        values=np.array(values),
        order=p,
        bandwidths=model.bandwidths,
        times=times,
    )


def time_averaged_rate(e: EntropyRateSeries) -> float:
    """Arithmetic mean of the specific entropy rates (nats per symbol)."""
    if len(e) == 0:
        raise ValueError("empty entropy-rate series")
    return float(e.values.mean())


def windowed_average(e: EntropyRateSeries, window: float) -> list[tuple[float, float]]:
    """Uniform-kernel moving average of the rates over event time.

    At each event time tau_i, averages the values whose times lie within
    window/2 of tau_i. Requires timestamps.
    """
    if e.times is None:
        raise MissingTimestamps("windowed averaging needs event timestamps")
    out = []
    half = window / 2.0
    for tau in e.times:
        mask = np.abs(e.times - tau) <= half
        out.append((float(tau), float(e.values[mask].mean())))
    return out


def bias_map(s: Series, truth, p: int, bandwidths,
             abs_tol: float = DEFAULT_ABS_TOL) -> list[tuple[HistoryBlock, float, float]]:
    """Estimated rate and its bias against an exact ground-truth function.

    ``truth`` maps a HistoryBlock to the exact specific entropy rate; only
    synthetic generators expose one. Returns (history, estimate,
    estimate - truth) per time index.
    """
    est = specific_entropy_series(s, p, bandwidths, abs_tol)
    pasts, _ = embed(s.values, p)
    out = []
    for j in range(pasts.shape[0]):
        hb = HistoryBlock(pasts[j], origin_index=int(est.indices[j]))
        h_hat = float(est.values[j])
        out.append((hb, h_hat, h_hat - float(truth(hb))))
    return out


def write_csv(e: EntropyRateSeries, path, source: Series | None = None,
              windowed: list[tuple[float, float]] | None = None):
    """Write `t,time,value,h_specific` rows plus trailer comments.

    ``value`` is the observed series value at t (blank when ``source`` is
    not given); ``time`` is blank without timestamps.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        header = "t,time,value,h_specific"
        if windowed is not None:
            header += ",h_windowed"
        fh.write(header + "\n")
        for j, (t, v) in enumerate(zip(e.indices, e.values)):
            time_cell = f"{float(e.times[j])!r}" if e.times is not None else ""
            value_cell = f"{float(source.values[int(t) - 1])!r}" if source is not None else ""
            row = f"{int(t)},{time_cell},{value_cell},{float(v)!r}"
            if windowed is not None:
                row += f",{float(windowed[j][1])!r}"
            fh.write(row + "\n")
        fh.write(f"# p={e.order}\n")
        fh.write(f"# bandwidths={','.join(repr(float(k)) for k in e.bandwidths)}\n")
        fh.write(f"# time_averaged={time_averaged_rate(e)!r}\n")
