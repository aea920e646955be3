"""Greedy matching-pursuit recovery of a K-sparse spectrum, plus an exhaustive
search oracle for small instances.

The greedy loop runs exactly K iterations: back-project the residual, take the
strongest unselected bin, jointly re-fit every selected coefficient by least
squares against the original measurements, and subtract the fit. Joint
re-estimation makes the residual non-increasing across iterations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .transform import (
    RankDeficiencyError,
    idft,
    inverse_dft_matrix,
    least_squares_solve,
)


class ReconstructionError(RuntimeError):
    """A recovery attempt that cannot produce a usable coefficient fit."""


class SearchBudgetError(ValueError):
    """Exhaustive search refused: the support enumeration is too large."""


DEFAULT_SEARCH_BUDGET = 10**6


@dataclass(frozen=True)
class SparseSpectrum:
    """K nonzero spectrum coefficients over an ambient transform length.

    ``indices`` are distinct frequency bins in [0, N-1]; ``amplitudes`` the
    matching complex coefficients. ``residual_norm`` is the fit residual
    ||y - A_K x_K||_2 when the spectrum came out of a recovery, None for
    ground-truth spectra.
    """

    indices: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)
    ambient_length: int
    residual_norm: float | None = None

    def __post_init__(self):
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("frequency indices must be pairwise distinct")
        if any(k < 0 or k >= self.ambient_length for k in self.indices):
            raise ValueError(f"frequency indices must lie in [0, {self.ambient_length - 1}]")
        if len(self.indices) != len(self.amplitudes):
            raise ValueError("indices and amplitudes must have equal length")

    @property
    def sparsity(self) -> int:
        return len(self.indices)

    def to_full(self) -> np.ndarray:
        """Embed into a dense length-N spectrum, zeros elsewhere."""
        full = np.zeros(self.ambient_length, dtype=np.complex128)
        full[list(self.indices)] = self.amplitudes
        return full


@dataclass(frozen=True)
class MeasurementSet:
    """Trusted sample positions and their complex values."""

    indices: tuple[int, ...]
    values: np.ndarray = field(repr=False)
    ambient_length: int

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values must have equal length")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("sample indices must be strictly increasing")
        if self.indices and (self.indices[0] < 0 or self.indices[-1] >= self.ambient_length):
            raise ValueError(f"sample indices must lie in [0, {self.ambient_length - 1}]")

    @property
    def size(self) -> int:
        return len(self.indices)


def measurement_set(signal: np.ndarray, indices: Sequence[int], n: int | None = None) -> MeasurementSet:
    """Take the samples of ``signal`` at ``indices`` (sorted) as measurements."""
    sig = np.asarray(signal, dtype=np.complex128)
    if n is None:
        n = sig.size
    idx = sorted(int(i) for i in indices)
    return MeasurementSet(indices=tuple(idx), values=sig[idx], ambient_length=n)


def reconstruct_signal(spectrum: SparseSpectrum) -> np.ndarray:
    """Time-domain signal of a sparse spectrum: embed into zeros, inverse DFT."""
    return idft(spectrum.to_full())


def _rows_for(m: MeasurementSet) -> np.ndarray:
    # Indices were validated by MeasurementSet; index the cached matrix directly.
    return inverse_dft_matrix(m.ambient_length)[list(m.indices)]


def mp_reconstruct(
    m: MeasurementSet,
    sparsity: int,
    residual_threshold: float | None = None,
) -> SparseSpectrum:
    """Matching-pursuit recovery of a ``sparsity``-sparse spectrum from ``m``.

    Each iteration back-projects the residual (A^H e), picks the largest
    magnitude at a bin not yet selected (smallest bin on ties), jointly
    re-fits all selected coefficients by least squares, and updates
    e = y - A_K x_K. Runs exactly ``sparsity`` iterations unless
    ``residual_threshold`` is given, in which case the loop may stop early
    once ||e||_2 <= residual_threshold.

    Raises ReconstructionError when the joint solve goes rank deficient, and
    ValueError when sparsity is outside [1, M].
    """
    if sparsity < 1:
        raise ValueError(f"target sparsity must be >= 1, got {sparsity}")
    if sparsity > m.size:
        raise ValueError(
            f"target sparsity {sparsity} exceeds measurement count {m.size}"
        )
    a = _rows_for(m)
    a_h = a.conj().T
    y = m.values

    selected: list[int] = []
    coeffs = np.zeros(0, dtype=np.complex128)
    residual = y.copy()
    for _ in range(sparsity):
        correlation = np.abs(a_h @ residual)
        if selected:
            correlation[selected] = -1.0
        k = int(np.argmax(correlation))
        selected.append(k)
        try:
            coeffs = least_squares_solve(a[:, selected], y)
        except RankDeficiencyError as exc:
            raise ReconstructionError(
                f"joint re-estimation failed at support size {len(selected)}: {exc}"
            ) from exc
        residual = y - a[:, selected] @ coeffs
        if residual_threshold is not None:
            if _norm(residual) <= residual_threshold:
                break

    return SparseSpectrum(
        indices=tuple(selected),
        amplitudes=coeffs,
        ambient_length=m.ambient_length,
        residual_norm=_norm(residual),
    )


def _norm(vector: np.ndarray) -> float:
    return math.sqrt(np.vdot(vector, vector).real)


def exhaustive_l0_oracle(
    m: MeasurementSet,
    sparsity: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> SparseSpectrum:
    """Brute-force sparsest fit: try every K-subset of bins, keep the best.

    Enumerates supports in lexicographic order and least-squares fits each,
    so ties on residual resolve to the lexicographically smallest support.
    Refuses when C(N, K) exceeds ``budget``.
    """
    if sparsity < 1:
        raise ValueError(f"target sparsity must be >= 1, got {sparsity}")
    if sparsity > m.size:
        raise ValueError(
            f"target sparsity {sparsity} exceeds measurement count {m.size}"
        )
    n = m.ambient_length
    n_supports = math.comb(n, sparsity)
    if n_supports > budget:
        raise SearchBudgetError(
            f"C({n}, {sparsity}) = {n_supports} supports exceeds budget {budget}"
        )

    a = _rows_for(m)
    y = m.values
    best_support: tuple[int, ...] | None = None
    best_coeffs: np.ndarray | None = None
    best_residual = np.inf
    for support in combinations(range(n), sparsity):
        cols = a[:, support]
        coeffs, _, _, _ = np.linalg.lstsq(cols, y, rcond=None)
        residual = _norm(y - cols @ coeffs)
        if residual < best_residual:
            best_support = support
            best_coeffs = coeffs
            best_residual = residual

    assert best_support is not None and best_coeffs is not None
    return SparseSpectrum(
        indices=best_support,
        amplitudes=best_coeffs,
        ambient_length=n,
        residual_norm=best_residual,
    )
