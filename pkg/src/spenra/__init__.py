"""spenra: state-specific differential entropy rate estimation.

Estimates the specific entropy rate of a scalar time series, the
differential entropy of the one-step predictive density conditioned on
the observed recent past, using conditional kernel density estimation
with cross-validated bandwidths and autoregressive order.
"""

__version__ = "0.1.0"

from . import classic, synth
from ._config import set_n_jobs
from .classic import apen, correlation_counts, loo_entropy_rate_uniform, phi_normalized, sampen
from .quadrature import adaptive_gk
from .synth import (
    FireParams,
    Markov2Params,
    OdeSpec,
    concatenate,
    gen_chaotic_iei,
    gen_markov2,
    integrate_and_fire,
    integrate_ode,
    markov2_transition_mixture,
    markov2_true_specific_entropy,
)
from .ckde import (
    ConditionalDensityModel,
    PredictiveSlice,
    conditional_log_density,
    kernel_value,
    marginal_past_density,
    predictive_slice,
)
from .entropy import (
    EntropyRateSeries,
    bias_map,
    mixture_entropy,
    specific_entropy_series,
    time_averaged_rate,
    windowed_average,
)
from .selection import (
    OrderRecord,
    SelectionReport,
    cv_score,
    optimize_bandwidths,
    select_order,
    smoothed_out_flags,
)
from .series import (
    EstimationConfig,
    HistoryBlock,
    Series,
    delay_blocks,
    read_csv,
    summary_stats,
)

__all__ = [
    "ConditionalDensityModel",
    "EntropyRateSeries",
    "EstimationConfig",
    "FireParams",
    "HistoryBlock",
    "Markov2Params",
    "OdeSpec",
    "OrderRecord",
    "PredictiveSlice",
    "SelectionReport",
    "Series",
    "adaptive_gk",
    "apen",
    "bias_map",
    "classic",
    "concatenate",
    "conditional_log_density",
    "correlation_counts",
    "cv_score",
    "delay_blocks",
    "gen_chaotic_iei",
    "gen_markov2",
    "integrate_and_fire",
    "integrate_ode",
    "kernel_value",
    "loo_entropy_rate_uniform",
    "marginal_past_density",
    "markov2_transition_mixture",
    "markov2_true_specific_entropy",
    "mixture_entropy",
    "optimize_bandwidths",
    "phi_normalized",
    "predictive_slice",
    "read_csv",
    "sampen",
    "select_order",
    "set_n_jobs",
    "smoothed_out_flags",
    "specific_entropy_series",
    "summary_stats",
    "synth",
    "time_averaged_rate",
    "windowed_average",
]
