"""Bandwidth and order selection by block cross-validation.

For a fixed order p the bandwidths are chosen by minimizing the
leave-one-out (0-block) negative mean conditional log-likelihood with
multistart Powell search on transformed log-bandwidths. The order is then
chosen as the minimizer of the l-block score, where the 2l+1 observations
around each evaluation point are withheld to break temporal dependence.

The cross-validation kernel precomputes the pairwise squared-difference
stacks per lag once per (series, order), so each objective evaluation is
a few dense n x n operations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import minimize
from scipy.special import logsumexp

from . import _config
from .ckde import LOG_2PI
from .errors import InsufficientData, OptimizerFailure
from .series import EstimationConfig, Series, embed

# bandwidth box, in units of the sample standard deviation
_BOX_LO = 1e-4
_BOX_HI = 1e3

# lag screening: bandwidth >= max(ABS, mult * std) means the lag is ignored
_SMOOTHED_OUT_ABS = 5.0

_MAX_ITER = 500
_FTOL = 1e-6

_WARM_START_PAD = 1e2  # in std units, for the newly added oldest lag


class _CVEvaluator:
    """Vectorized CV_l objective for one (series, order, half-width)."""

    def __init__(self, values: np.ndarray, p: int, l: int):
        n_total = values.size
        if n_total - p - (2 * l + 1) < 8:
            raise InsufficientData(
                f"need T - p - (2l+1) >= 8, got T={n_total}, p={p}, l={l}"
            )
        pasts, futures = embed(values, p)
        n = futures.size
        self.p, self.n = p, n
        # squared pairwise differences per coordinate: lags 0..p-1, then future
        self.sq = np.empty((p + 1, n, n))
        for j in range(p):
            d = pasts[:, j, None] - pasts[None, :, j]
            self.sq[j] = d * d
        d = futures[:, None] - futures[None, :]
        self.sq[p] = d * d
        # leave-out band |t - t'| <= l (includes self; l=0 is plain LOO)
        idx = np.arange(n)
        self.band = np.abs(idx[:, None] - idx[None, :]) <= l

    def retained_counts(self) -> np.ndarray:
        return (~self.band).sum(axis=1)

    def score(self, k: np.ndarray) -> float:
        """CV_l(p, k): negative mean leave-block-out conditional log density."""
        p = self.p
        k = np.asarray(k, dtype=float)
        inv = 0.5 / (k * k)
        lw = -np.tensordot(inv[:p], self.sq[:p], axes=1)
        lw -= float(np.log(k[:p]).sum() + 0.5 * p * LOG_2PI)
        lw[self.band] = -np.inf
        with np.errstate(invalid="ignore"):
            log_marg = logsumexp(lw, axis=1)
            lw -= inv[p] * self.sq[p]
            log_joint = logsumexp(lw, axis=1) - np.log(k[p]) - 0.5 * LOG_2PI
        cond = log_joint - log_marg
        if not np.all(np.isfinite(cond)):
            return np.inf
        return float(-cond.mean())


def cv_score(s: Series, p: int, k, l: int) -> float:
    """l-block cross-validation score of bandwidths ``k`` at order p.

    The leave-out window around each evaluation index is clipped at the
    series edges; denominators use retained counts. l=0 reduces to
    leave-one-out.
    """
    k = np.asarray(k, dtype=float)
    if k.size != p + 1 or np.any(k <= 0):
        raise ValueError("k must be p+1 positive bandwidths")
    return _CVEvaluator(s.values, p, l).score(k)


def _silverman(std: float, n: int) -> float:
    return 1.06 * std * n ** (-0.2)


def _to_log10k(u: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Map unconstrained coordinates into the log10-bandwidth box."""
    with np.errstate(over="ignore"):  # exp overflow saturates to the box edge
        return lo + (hi - lo) / (1.0 + np.exp(-u))


def _from_log10k(log10k: np.ndarray, lo: float, hi: float) -> np.ndarray:
    frac = np.clip((log10k - lo) / (hi - lo), 1e-6, 1 - 1e-6)
    return np.log(frac / (1.0 - frac))


def _optimize(values: np.ndarray, p: int, seed: int,
              warm_start: np.ndarray | None = None) -> tuple[np.ndarray, float]:
    """Multistart Nelder-Mead over log-bandwidths; returns (k, cv0 score)."""
    T = values.size
    if T < p + 10:
        raise InsufficientData(f"need T >= p + 10, got T={T}, p={p}")
    std = float(values.std(ddof=1))
    if std == 0.0:
        std = 1.0
    lo, hi = np.log10(_BOX_LO * std), np.log10(_BOX_HI * std)
    evaluator = _CVEvaluator(values, p, l=0)

    ref = np.log10(_silverman(std, T))
    starts = [np.full(p + 1, ref + np.log10(c)) for c in (0.25, 1.0, 4.0)]
    # past fully smoothed out: the all-lags-irrelevant corner of the box
    starts.append(np.concatenate([np.full(p, np.log10(50.0 * std)), [ref]]))
    rng = np.random.default_rng(seed)
    starts += [rng.uniform(ref - 1.5, ref + 1.5, size=p + 1) for _ in range(2)]
    if warm_start is not None:
        starts.append(np.log10(np.asarray(warm_start, dtype=float)))

    def objective(u):
        return evaluator.score(10.0 ** _to_log10k(u, lo, hi))

    def run(start_log10k):
        u0 = _from_log10k(np.clip(start_log10k, lo, hi), lo, hi)
        res = minimize(
            objective, u0, method="Powell",
            options={"maxiter": _MAX_ITER, "ftol": _FTOL, "xtol": 1e-4},
        )
        return float(res.fun), 10.0 ** _to_log10k(res.x, lo, hi)

    results = Parallel(n_jobs=_config.n_jobs(), prefer="threads")(
        delayed(run)(s0) for s0 in starts
    )
    finite = [(fun, i, k) for i, (fun, k) in enumerate(results) if np.isfinite(fun)]
    if not finite:
        raise OptimizerFailure("no start produced a finite CV score")
    fun, _, k = min(finite, key=lambda r: (r[0], r[1]))
    return k, fun


def optimize_bandwidths(s: Series, p: int, seed: int = 0) -> np.ndarray:
    """CV-optimal bandwidths (k_1..k_p past oldest-to-newest, then k_{p+1}).

    Minimizes the leave-one-out score from six deterministic start points
    (three Silverman-scaled, one with the whole past smoothed out, two
    seeded-random); every returned bandwidth lies in [1e-4, 1e3] sample
    standard deviations.
    """
    k, _ = _optimize(s.values, p, seed)
    return k


def smoothed_out_flags(k: np.ndarray, std: float,
                       threshold_mult: float = _SMOOTHED_OUT_ABS) -> np.ndarray:
    """True for each past lag whose bandwidth effectively ignores the lag."""
    cutoff = max(_SMOOTHED_OUT_ABS, threshold_mult * std)
    return np.asarray(k, dtype=float)[:-1] >= cutoff


@dataclass(frozen=True)
class OrderRecord:
    order: int
    bandwidths: np.ndarray
    cv0_score: float
    cvl_score: float
    smoothed_out: np.ndarray  # per past lag, oldest to newest


@dataclass(frozen=True)
class SelectionReport:
    records: tuple[OrderRecord, ...]
    chosen_order: int
    block_half_width: int

    def __post_init__(self):
        scores = [(r.cvl_score, r.order) for r in self.records]
        best = min(scores)[1]
        if best != self.chosen_order:
            raise ValueError("chosen_order must minimize the l-block score")

    def record(self, p: int) -> OrderRecord:
        for r in self.records:
            if r.order == p:
                return r
        raise KeyError(p)

    def chosen_bandwidths(self) -> np.ndarray:
        return self.record(self.chosen_order).bandwidths

    def to_csv(self, path):
        """Table-style CSV: one row per order, smoothed-out lags blank."""
        max_p = max(r.order for r in self.records)
        cols = ["p", "k0"] + [f"k-{j}" for j in range(1, max_p + 1)]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(cols + ["cv0", "cvl"]) + "\n")
            for r in self.records:
                # bandwidths are stored oldest-to-newest; table columns run
                # k-1 (newest) .. k-p (oldest)
                cells = [str(r.order), f"{float(r.bandwidths[-1])!r}"]
                for j in range(1, max_p + 1):
                    if j > r.order:
                        cells.append("")
                    elif r.smoothed_out[r.order - j]:
                        cells.append("")
                    else:
                        cells.append(f"{float(r.bandwidths[r.order - j])!r}")
                cells += [f"{r.cv0_score!r}", f"{r.cvl_score!r}"]
                fh.write(",".join(cells) + "\n")
            fh.write(f"# chosen_order={self.chosen_order}\n")


def select_order(s: Series, config: EstimationConfig | None = None) -> SelectionReport:
    """Sweep orders 1..max_order: optimize bandwidths at l=0, score at l.

    The optimum at order p seeds one extra start at order p+1 (the new
    oldest lag padded with a large bandwidth), which speeds the sweep
    without breaking determinism. Ties in the l-block score go to the
    smallest order.
    """
    config = config or EstimationConfig()
    config.validate_for(s)
    values = s.values
    std = float(values.std(ddof=1)) or 1.0
    l = config.block_half_width
    seeds = [int(seq.generate_state(1)[0]) for seq in
             np.random.SeedSequence(config.rng_seed).spawn(config.max_order)]

    records = []
    warm = None
    for p in range(1, config.max_order + 1):
        k, cv0 = _optimize(values, p, seeds[p - 1], warm_start=warm)
        cvl = _CVEvaluator(values, p, l).score(k)
        flags = smoothed_out_flags(k, std, config.smoothed_out_threshold)
        records.append(OrderRecord(p, k, cv0, cvl, flags))
        pad = min(_WARM_START_PAD * std, _BOX_HI * std * 0.99)
        warm = np.concatenate(([pad], k))

    chosen = min(records, key=lambda r: (r.cvl_score, r.order)).order
    return SelectionReport(tuple(records), chosen, l)
