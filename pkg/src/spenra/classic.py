"""Approximate Entropy, Sample Entropy, and their kernel-density bridge.

ApEn is built from self-match-including sup-norm correlation counts; with
the (2r)^{-p} normalization those counts are exactly a uniform-product-
kernel density estimate, which yields the identity
Phi_normalized(p, r) = Phi(p, r) - p log(2r) and, with a leave-one-out
correction, an estimator of the finite-p differential entropy rate.
"""

from __future__ import annotations

import numpy as np

from .errors import IsolatedVector, NoMatches, TooShort
from .series import Series


def _embed_vectors(values: np.ndarray, p: int) -> np.ndarray:
    """All T-p+1 overlapping embedding vectors of length p, as rows."""
    T = values.size
    if T < p:
        raise TooShort(f"need T >= p, got T={T}, p={p}")
    return np.lib.stride_tricks.sliding_window_view(values, p)


def _match_counts(vectors: np.ndarray, r: float) -> np.ndarray:
    """Number of vectors (self included) within sup-norm r of each vector."""
    diffs = np.abs(vectors[:, None, :] - vectors[None, :, :]).max(axis=2)
    return (diffs <= r).sum(axis=1)


def correlation_counts(s: Series, p: int, r: float) -> np.ndarray:
    """Fraction of embedding vectors within sup-norm r of each vector.

    Self-matches are included, so every count is at least 1/(T-p+1).
    """
    vectors = _embed_vectors(s.values, p)
    return _match_counts(vectors, r) / vectors.shape[0]


def _phi(s: Series, p: int, r: float) -> float:
    return float(np.log(correlation_counts(s, p, r)).mean())


def apen(s: Series, p: int, r: float) -> float:
    """Approximate Entropy: Phi(p, r) - Phi(p+1, r).

    Total for every r > 0 because self-matching keeps all counts positive.
    """
    if len(s) < p + 2:
        raise TooShort(f"need T >= p + 2, got T={len(s)}, p={p}")
    return _phi(s, p, r) - _phi(s, p + 1, r)


def sampen(s: Series, p: int, r: float) -> float:
    """Sample Entropy: -log(A/B) with self-matches excluded.

    A counts (p+1)-matches and B counts p-matches over the T-p template
    vectors, sup-norm tolerance r. Raises NoMatches instead of returning
    an infinity when either count is zero.
    """
    if len(s) < p + 2:
        raise TooShort(f"need T >= p + 2, got T={len(s)}, p={p}")
    n_templates = len(s) - p
    vec_p = _embed_vectors(s.values, p)[:n_templates]
    vec_p1 = _embed_vectors(s.values, p + 1)
    b = int(_match_counts(vec_p, r).sum()) - n_templates
    a = int(_match_counts(vec_p1, r).sum()) - n_templates
    if a == 0 or b == 0:
        raise NoMatches(f"no template matches at r={r}; increase the tolerance")
    return float(-np.log(a / b))


def phi_normalized(s: Series, p: int, r: float) -> float:
    """Mean log of the uniform-product-kernel KDE at the embedding vectors.

    Computed through the KDE form (counts scaled by (2r)^{-p}); satisfies
    phi_normalized = phi - p log(2r) exactly.
    """
    vectors = _embed_vectors(s.values, p)
    n = vectors.shape[0]
    density = _match_counts(vectors, r) / (n * (2.0 * r) ** p)
    return float(np.log(density).mean())


def loo_entropy_rate_uniform(s: Series, p: int, r: float,
                             skip_isolated: bool = False) -> float:
    """Finite-p entropy rate from leave-one-out uniform-kernel entropies.

    Returns hsep(p+1) - hsep(p), where hsep(m) is the LOO joint-entropy
    estimate -mean log f_loo at order m. A vector whose only sup-norm
    neighbor is itself makes the estimate undefined; by default this
    raises IsolatedVector (silent dropping biases the estimate), while
    skip_isolated=True drops such vectors from the average.
    """
    if len(s) < p + 2:
        raise TooShort(f"need T >= p + 2, got T={len(s)}, p={p}")

    def loo_joint_entropy(m: int) -> float:
        vectors = _embed_vectors(s.values, m)
        n = vectors.shape[0]
        counts = _match_counts(vectors, r) - 1  # exclude self
        if np.any(counts == 0):
            if not skip_isolated:
                raise IsolatedVector(
                    f"{int((counts == 0).sum())} embedding vector(s) have no "
                    f"neighbor within r={r} at order {m}"
                )
            counts = counts[counts > 0]
            if counts.size == 0:
                raise IsolatedVector("every embedding vector is isolated")
        log_density = np.log(counts / ((n - 1) * (2.0 * r) ** m))
        return float(-log_density.mean())

    return loo_joint_entropy(p + 1) - loo_joint_entropy(p)
