"""Seeded generators for sparse test signals, Gaussian inlier noise, and
heavy-tailed impulsive outliers.

Every generator is a pure function of its spec and seed. Distinct purposes
(signal support, Gaussian draws, outlier placement) pull from independent
streams derived from one master seed, so changing the outlier count never
perturbs the signal itself.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .recovery import SparseSpectrum, reconstruct_signal

# Per-purpose stream tags, mixed into the seed sequence alongside the master
# seed (and run index, for batched experiments).
SIGNAL_STREAM = 1
GAUSSIAN_STREAM = 2
IMPULSE_STREAM = 3
RANSAC_STREAM = 4

_DIVISION_GUARD = 1e-300


def stream_rng(master_seed: int, tag: int, *extra: int) -> np.random.Generator:
    """Independent generator for one purpose under a master seed."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, tag, *extra]))


@dataclass(frozen=True)
class SignalSpec:
    """Shape of a random sparse test signal."""

    length: int
    sparsity: int
    amplitude_range: tuple[float, float] = (1.0, 1.0)
    rng_seed: int = 0

    def __post_init__(self):
        if self.sparsity > self.length:
            raise ValueError(f"sparsity {self.sparsity} exceeds length {self.length}")
        if self.sparsity < 0 or self.length < 1:
            raise ValueError("need length >= 1 and sparsity >= 0")
        lo, hi = self.amplitude_range
        if lo > hi:
            raise ValueError(f"amplitude range is inverted: [{lo}, {hi}]")


@dataclass(frozen=True)
class NoiseSpec:
    """Inlier and outlier noise parameters.

    ``gaussian_sigma`` is the per-part (real/imaginary) deviation of the small
    noise. Outliers are ratios of standard Gaussians scaled by
    ``cauchy_scale``, optionally shifted by ``outlier_offset`` to force every
    one of them far from the signal.
    """

    gaussian_sigma: float = 0.0
    outlier_count: int = 0
    cauchy_scale: float = 3.0
    outlier_offset: complex = 0.0 + 0.0j

    def __post_init__(self):
        if self.gaussian_sigma < 0:
            raise ValueError("gaussian sigma must be >= 0")
        if self.outlier_count < 0:
            raise ValueError("outlier count must be >= 0")
        if self.cauchy_scale <= 0:
            raise ValueError("cauchy scale must be > 0")


def gen_sparse_signal(spec: SignalSpec) -> tuple[np.ndarray, SparseSpectrum]:
    """Random sparse signal and its ground-truth spectrum.

    Frequency bins are drawn without replacement, phases uniform on [0, 2pi),
    time-domain component amplitudes uniform over ``amplitude_range``. The
    stored spectrum coefficients are N * A * exp(j phi), so the inverse
    transform reproduces unit-amplitude complex tones for A = 1.
    """
    rng = stream_rng(spec.rng_seed, SIGNAL_STREAM)
    n, k = spec.length, spec.sparsity
    if k == 0:
        truth = SparseSpectrum(indices=(), amplitudes=np.zeros(0, dtype=np.complex128),
                               ambient_length=n)
        return np.zeros(n, dtype=np.complex128), truth
    bins = np.sort(rng.choice(n, size=k, replace=False))
    amplitudes = rng.uniform(spec.amplitude_range[0], spec.amplitude_range[1], size=k)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=k)
    coefficients = n * amplitudes * np.exp(1j * phases)
    truth = SparseSpectrum(indices=tuple(int(b) for b in bins),
                           amplitudes=coefficients, ambient_length=n)
    return reconstruct_signal(truth), truth


def gen_gaussian_noise(n: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Complex noise with independent parts, each zero-mean with ``sigma``."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return np.zeros(n, dtype=np.complex128)
    return rng.normal(0.0, sigma, size=n) + 1j * rng.normal(0.0, sigma, size=n)


def _cauchy_parts(count: int, scale: float, rng: np.random.Generator) -> np.ndarray:
    numerator = rng.standard_normal(count)
    denominator = rng.standard_normal(count)
    while np.any(np.abs(denominator) < _DIVISION_GUARD):
        redraw = np.abs(denominator) < _DIVISION_GUARD
        denominator[redraw] = rng.standard_normal(int(redraw.sum()))
    return scale * numerator / denominator


def gen_impulsive_noise(
    n: int,
    spec: NoiseSpec,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Impulses at ``outlier_count`` distinct positions, zero elsewhere.

    Each impulse is scale * g1/g2 + j * scale * g3/g4 (independent standard
    Gaussians) plus the configured offset. Returns the noise vector and the
    planted positions, sorted; positions are for evaluation only.
    """
    if spec.outlier_count > n:
        raise ValueError(f"cannot place {spec.outlier_count} outliers in {n} samples")
    noise = np.zeros(n, dtype=np.complex128)
    if spec.outlier_count == 0:
        return noise, np.zeros(0, dtype=np.intp)
    positions = np.sort(rng.choice(n, size=spec.outlier_count, replace=False))
    values = (
        _cauchy_parts(spec.outlier_count, spec.cauchy_scale, rng)
        + 1j * _cauchy_parts(spec.outlier_count, spec.cauchy_scale, rng)
        + spec.outlier_offset
    )
    noise[positions] = values
    return noise, positions
