"""DFT/IDFT, partial inverse-DFT measurement matrices, and complex least squares.

Conventions: the forward transform carries no 1/N factor,
    X(k) = sum_n x(n) exp(-j 2 pi n k / N),
and the inverse carries the full 1/N,
    x(n) = (1/N) sum_k X(k) exp(j 2 pi n k / N).

A measurement matrix is a row subset of the inverse DFT matrix: keeping the
rows at the sample positions that are still trusted maps a sparse spectrum
onto exactly those samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

_EPS = float(np.finfo(np.float64).eps)


class RankDeficiencyError(RuntimeError):
    """Least-squares system whose column space has collapsed.

    Carries the detected numerical rank so callers can report how many
    independent columns survived.
    """

    def __init__(self, rank: int, needed: int):
        super().__init__(
            f"rank-deficient least-squares system: rank {rank} < {needed} columns"
        )
        self.rank = rank
        self.needed = needed


def _as_complex_vector(x, name: str = "signal") -> np.ndarray:
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    return arr


def dft(x) -> np.ndarray:
    """Forward DFT, X(k) = sum_n x(n) exp(-j 2 pi n k / N), no 1/N factor."""
    return np.fft.fft(_as_complex_vector(x))


def idft(X) -> np.ndarray:
    """Inverse DFT, x(n) = (1/N) sum_k X(k) exp(j 2 pi n k / N)."""
    return np.fft.ifft(_as_complex_vector(X, "spectrum"))


@lru_cache(maxsize=8)
def inverse_dft_matrix(n: int) -> np.ndarray:
    """Full N x N inverse DFT matrix, entries exp(j 2 pi n k / N) / N.

    Cached and returned read-only; callers share the same array.
    """
    if n < 1:
        raise ValueError(f"transform length must be >= 1, got {n}")
    rows = np.arange(n).reshape(-1, 1)
    cols = np.arange(n).reshape(1, -1)
    w = np.exp(2j * np.pi * rows * cols / n) / n
    w.setflags(write=False)
    return w


@dataclass(frozen=True)
class MeasurementMatrix:
    """Rows of the inverse DFT matrix at the retained sample positions.

    ``rows`` is M x N complex; ``source_indices`` are the sample positions the
    rows were taken from, strictly increasing.
    """

    rows: np.ndarray = field(repr=False)
    source_indices: tuple[int, ...]
    ambient_length: int

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.ambient_length


def partial_measurement_matrix(n: int, indices: Sequence[int]) -> MeasurementMatrix:
    """Build the |indices| x N matrix of inverse-DFT rows at ``indices``.

    Indices must be distinct and within [0, N-1]; they are stored sorted.
    """
    idx = np.asarray(sorted(int(i) for i in indices), dtype=np.intp)
    if idx.size == 0:
        raise ValueError("index set must be nonempty")
    if len(set(idx.tolist())) != idx.size:
        raise ValueError("duplicate sample indices in measurement set")
    if idx[0] < 0 or idx[-1] >= n:
        raise ValueError(f"sample indices must lie in [0, {n - 1}]")
    return MeasurementMatrix(rows=inverse_dft_matrix(n)[idx],
                             source_indices=tuple(idx.tolist()), ambient_length=n)


def adjoint_apply(matrix: MeasurementMatrix, y) -> np.ndarray:
    """Back-projection A^H y of measurements onto the spectrum domain."""
    yv = _as_complex_vector(y, "measurements")
    if yv.size != matrix.m:
        raise ValueError(f"expected {matrix.m} measurements, got {yv.size}")
    return matrix.rows.conj().T @ yv


def least_squares_solve(a_k: np.ndarray, y) -> np.ndarray:
    """Minimize ||A_K x - y||_2 over the selected columns.

    Solved through an orthogonal (SVD) factorization rather than normal
    equations. Raises :class:`RankDeficiencyError` when the smallest singular
    value falls below max(M, K) * eps * (largest column norm).
    """
    a = np.asarray(a_k, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"coefficient matrix must be 2-D, got shape {a.shape}")
    yv = np.asarray(y, dtype=np.complex128)
    m, k = a.shape
    if yv.shape != (m,):
        raise ValueError(f"expected {m} measurements, got shape {yv.shape}")
    if m < k:
        raise ValueError(f"underdetermined solve: {m} rows < {k} columns")

    solution, _, _, singular_values = np.linalg.lstsq(a, yv, rcond=None)
    col_norm = math.sqrt(float(np.max((a.real * a.real + a.imag * a.imag).sum(axis=0))))
    tol = max(m, k) * _EPS * col_norm
    rank = int(np.count_nonzero(singular_values > tol))
    if rank < k:
        raise RankDeficiencyError(rank=rank, needed=k)
    return solution
