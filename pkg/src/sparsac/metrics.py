"""SNR measurement and the closed-form performance predictions.

The clean-subset probability is the exact hypergeometric product for drawing
M samples that all miss the I outliers; its reciprocal predicts how many
random subsets the consensus loop needs. The SNR identities tie the output
quality to how many samples the final reconstruction used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Error energies below this fraction of the signal energy count as zero, and
# the ratio is reported as infinite.
_UNDERFLOW_FRACTION = 1e-300


class InfeasibleError(ValueError):
    """No outlier-free subset exists: M exceeds the number of inliers."""


@dataclass(frozen=True)
class SnrReport:
    """Per-run SNR summary, all values in dB (math.inf marks a zero-error fit).

    snr_in measures the raw input against the clean signal (outliers
    included), snr_in0 excludes the impulsive part, snr_out0 scores the
    winning subset-stage reconstruction, snr_out the consensus-stage one.
    """

    snr_in: float
    snr_in0: float
    snr_out0: float
    snr_out: float
    consensus_size: int


def snr_db(reference, estimate) -> float:
    """10 log10 of signal energy over error energy.

    Returns math.inf when the error energy underflows below 1e-300 of the
    signal energy. An all-zero reference is rejected.
    """
    ref = np.asarray(reference, dtype=np.complex128)
    est = np.asarray(estimate, dtype=np.complex128)
    if ref.shape != est.shape:
        raise ValueError(f"length mismatch: {ref.shape} vs {est.shape}")
    signal_energy = float(np.sum(np.abs(ref) ** 2))
    if signal_energy == 0.0:
        raise ValueError("reference signal is identically zero")
    error_energy = float(np.sum(np.abs(ref - est) ** 2))
    if error_energy < _UNDERFLOW_FRACTION * signal_energy:
        return math.inf
    return 10.0 * math.log10(signal_energy / error_energy)


def clean_subset_probability(m: int, n: int, i: int) -> float:
    """Probability that M distinct uniform draws from N samples miss all I outliers."""
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= M <= N, got M={m}, N={n}")
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= I <= N, got I={i}")
    if m > n - i:
        return 0.0
    p = 1.0
    for j in range(m):
        p *= (n - i - j) / (n - j)
    return p


def expected_trials(m: int, n: int, i: int) -> float:
    """Expected subset draws until one is outlier-free: 1 / P(M, N, I)."""
    p = clean_subset_probability(m, n, i)
    if p == 0.0:
        raise InfeasibleError(
            f"no clean subset exists: M={m} > N-I={n - i} inliers"
        )
    return 1.0 / p


def classic_ransac_trials(m: int, n: int, i: int, confidence: float) -> float:
    """Trial count from the classic approximation ln(1-P)/ln(1-((N-I)/N)^M).

    This treats the M draws as independent, which is only accurate while
    (N-I-M)/(N-M) stays close to (N-I)/N; the exact product in
    :func:`clean_subset_probability` is preferable otherwise (the
    approximation overestimates the clean-subset probability).
    """
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    if not 0 <= i < n:
        raise ValueError(f"need 0 <= I < N, got I={i}")
    if i == 0:
        return 0.0
    single = ((n - i) / n) ** m
    return math.log(1.0 - confidence) / math.log(1.0 - single)


def predicted_snr_out(snr_in0: float, consensus_size: float, sparsity: int) -> float:
    """Output SNR of a K-sparse reconstruction from D samples: in0 + 10 log(D/K)."""
    if sparsity < 1:
        raise ValueError(f"sparsity must be >= 1, got {sparsity}")
    if consensus_size < sparsity:
        raise ValueError(
            f"consensus size {consensus_size} is below the sparsity {sparsity}"
        )
    return snr_in0 + 10.0 * math.log10(consensus_size / sparsity)


def snr_improvement_over_subset(consensus_size: float, subset_size: float) -> float:
    """Gain of the consensus-stage fit over the subset-stage one: 10 log(D/M)."""
    if consensus_size < 1 or subset_size < 1:
        raise ValueError("both sizes must be >= 1")
    return 10.0 * math.log10(consensus_size / subset_size)
