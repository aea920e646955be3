"""Sample-consensus denoising loop.

Random M-subsets of the noisy signal are used as compressive-sensing
measurements; each trial reconstruction is scored by how many samples of the
full signal land within an inlier bound of it. Once enough samples agree (or
the trial budget runs out), the final reconstruction is re-fit from the best
consensus set found.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .recovery import (
    ReconstructionError,
    SparseSpectrum,
    measurement_set,
    mp_reconstruct,
    reconstruct_signal,
)

# MAD of a Gaussian is 0.6745 sigma; dividing by it turns MAD into a sigma estimate.
GAUSSIAN_MAD_SCALE = 0.6745

# Default inlier bound is 2.5 per-part sigmas, widened by sqrt(2) because the
# complex modulus of the error mixes both parts.
DEFAULT_INLIER_MULTIPLIER = 2.5
COMPLEX_MODULUS_CORRECTION = math.sqrt(2.0)


@dataclass(frozen=True)
class RansacConfig:
    """Tunables of the consensus loop.

    subset_size is M, inlier_bound d, consensus_threshold T, max_trials the
    trial budget, sparsity K. The RNG seed makes a run fully reproducible.
    """

    subset_size: int
    inlier_bound: float
    consensus_threshold: int
    max_trials: int
    sparsity: int
    rng_seed: int = 0

    def validate(self, n: int) -> None:
        if not 1 <= self.sparsity <= self.subset_size:
            raise ValueError(
                f"need 1 <= K <= M, got K={self.sparsity}, M={self.subset_size}"
            )
        if self.subset_size > n:
            raise ValueError(f"subset size {self.subset_size} exceeds signal length {n}")
        if not 0 < self.consensus_threshold <= n:
            raise ValueError(
                f"consensus threshold must be in [1, {n}], got {self.consensus_threshold}"
            )
        if self.max_trials < 1:
            raise ValueError(f"max_trials must be >= 1, got {self.max_trials}")
        if self.inlier_bound < 0:
            raise ValueError(f"inlier bound must be >= 0, got {self.inlier_bound}")
        if self.sparsity * 5 > self.subset_size:
            warnings.warn(
                f"K={self.sparsity} exceeds M/5={self.subset_size / 5:.1f}; "
                "recovery reliability drops above that ratio",
                stacklevel=2,
            )


def default_consensus_threshold(n: int) -> int:
    """T = ceil(3N/4): tolerate up to a quarter of the samples as outliers."""
    return math.ceil(3 * n / 4)


@dataclass(frozen=True)
class NoiseScaleEstimate:
    """Per-part robust sigma estimates and their combined per-part scale."""

    sigma_real: float
    sigma_imag: float

    @property
    def combined_sigma(self) -> float:
        return math.hypot(self.sigma_real, self.sigma_imag) / math.sqrt(2.0)


@dataclass(frozen=True)
class DenoiseOutcome:
    """Result of one consensus run.

    ``consensus`` is the retained sample-index set, ``trials_used`` how many
    subsets were drawn, ``trial_sparse`` the winning subset-stage fit and
    ``final_sparse`` the re-fit over the consensus set. ``passthrough`` marks
    the degenerate case where no trial produced a usable model and
    ``reconstructed`` is just the noisy input.
    """

    reconstructed: np.ndarray = field(repr=False)
    consensus: tuple[int, ...]
    trials_used: int
    reached_consensus: bool
    final_sparse: SparseSpectrum
    trial_sparse: SparseSpectrum | None
    trial_consensus_sizes: tuple[int, ...] = ()
    passthrough: bool = False


def mad(values) -> float:
    """Median absolute deviation, median(|v - median(v)|)."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("mad of an empty vector")
    return float(np.median(np.abs(v - np.median(v))))


def robust_sigma(signal) -> NoiseScaleEstimate:
    """MAD-based sigma of the real and imaginary parts, taken separately."""
    arr = np.asarray(signal, dtype=np.complex128)
    if arr.size == 0:
        raise ValueError("cannot estimate noise scale of an empty signal")
    return NoiseScaleEstimate(
        sigma_real=mad(arr.real) / GAUSSIAN_MAD_SCALE,
        sigma_imag=mad(arr.imag) / GAUSSIAN_MAD_SCALE,
    )


def default_inlier_bound(
    sigma: float,
    multiplier: float = DEFAULT_INLIER_MULTIPLIER,
    modulus_correction: float = COMPLEX_MODULUS_CORRECTION,
) -> float:
    """Inlier bound from a per-part noise scale: multiplier * sqrt(2) * sigma."""
    return multiplier * modulus_correction * sigma


def consensus_set(noisy: np.ndarray, model: np.ndarray, bound: float) -> np.ndarray:
    """Indices where |model(n) - noisy(n)| <= bound (inclusive boundary)."""
    a = np.asarray(noisy, dtype=np.complex128)
    b = np.asarray(model, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return np.flatnonzero(np.abs(b - a) <= bound)


def draw_subset(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """M distinct indices, uniform over all M-subsets of [0, N-1], sorted."""
    return np.sort(rng.choice(n, size=m, replace=False))


def ransac_denoise(
    noisy,
    cfg: RansacConfig,
    rng: np.random.Generator | None = None,
) -> DenoiseOutcome:
    """Run the consensus loop on ``noisy`` and reconstruct from the agreed set.

    Draws M-subsets until one trial's reconstruction is within the inlier
    bound of at least T samples or the trial budget runs out, then re-fits on
    the best consensus set seen (largest; residual breaks ties). Trials whose
    joint solve degenerates count against the budget with an empty consensus.
    """
    x = np.asarray(noisy, dtype=np.complex128)
    n = x.size
    cfg.validate(n)
    if rng is None:
        rng = np.random.default_rng(cfg.rng_seed)

    best_consensus: np.ndarray | None = None
    best_residual = np.inf
    best_trial: SparseSpectrum | None = None
    reached = False
    trials = 0
    sizes: list[int] = []
    while trials < cfg.max_trials:
        trials += 1
        subset = draw_subset(rng, n, cfg.subset_size)
        trial_m = measurement_set(x, subset, n)
        try:
            trial_fit = mp_reconstruct(trial_m, cfg.sparsity)
        except ReconstructionError:
            sizes.append(0)
            continue
        model = reconstruct_signal(trial_fit)
        agreed = consensus_set(x, model, cfg.inlier_bound)
        sizes.append(agreed.size)
        better = best_consensus is None or agreed.size > best_consensus.size or (
            agreed.size == best_consensus.size
            and trial_fit.residual_norm < best_residual
        )
        if better:
            best_consensus = agreed
            best_residual = trial_fit.residual_norm
            best_trial = trial_fit
        if agreed.size >= cfg.consensus_threshold:
            reached = True
            break

    if best_trial is None or best_consensus is None or best_consensus.size < cfg.sparsity:
        # Nothing usable came out of any trial: hand the input back, flagged.
        empty = SparseSpectrum(indices=(), amplitudes=np.zeros(0, dtype=np.complex128),
                               ambient_length=n)
        return DenoiseOutcome(
            reconstructed=x.copy(),
            consensus=() if best_consensus is None else tuple(best_consensus.tolist()),
            trials_used=trials,
            reached_consensus=False,
            final_sparse=empty,
            trial_sparse=best_trial,
            trial_consensus_sizes=tuple(sizes),
            passthrough=True,
        )

    final_m = measurement_set(x, best_consensus, n)
    try:
        final_fit = mp_reconstruct(final_m, cfg.sparsity)
    except ReconstructionError:
        final_fit = best_trial  # consensus re-fit degenerated; keep the trial model
    return DenoiseOutcome(
        reconstructed=reconstruct_signal(final_fit),
        consensus=tuple(best_consensus.tolist()),
        trials_used=trials,
        reached_consensus=reached,
        final_sparse=final_fit,
        trial_sparse=best_trial,
        trial_consensus_sizes=tuple(sizes),
    )
