"""File formats: signal CSV, ground-truth sidecar, inlier mask, run table.

Signals travel as UTF-8 CSV with header ``index,re,im`` and one row per
sample, indices contiguous from 0. Floats are printed with shortest
round-trip formatting so files are bit-exact under re-reading.
"""
from __future__ import annotations

import csv
from typing import Iterable, Sequence

import numpy as np

from .experiment import RUN_COLUMNS, ExperimentResult
from .recovery import SparseSpectrum

SIGNAL_HEADER = ["index", "re", "im"]
SIDECAR_HEADER = ["kind", "index", "re", "im"]
MASK_HEADER = ["index", "inlier"]


class SignalFormatError(ValueError):
    """A signal file that does not parse; carries the offending line number."""

    def __init__(self, path, line_number: int, message: str):
        super().__init__(f"{path}:{line_number}: {message}")
        self.line_number = line_number


def _fmt(x: float) -> str:
    return repr(float(x))


def write_signal(path, signal) -> None:
    arr = np.asarray(signal, dtype=np.complex128)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SIGNAL_HEADER)
        for idx, value in enumerate(arr):
            writer.writerow([idx, _fmt(value.real), _fmt(value.imag)])


def read_signal(path) -> np.ndarray:
    """Parse a signal CSV, enforcing contiguous indices from zero."""
    values: list[complex] = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != SIGNAL_HEADER:
            raise SignalFormatError(path, 1, f"expected header {','.join(SIGNAL_HEADER)}")
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise SignalFormatError(path, line_number, f"expected 3 fields, got {len(row)}")
            try:
                idx = int(row[0])
                re, im = float(row[1]), float(row[2])
            except ValueError as exc:
                raise SignalFormatError(path, line_number, str(exc)) from None
            if idx != len(values):
                raise SignalFormatError(
                    path, line_number, f"expected index {len(values)}, got {idx}"
                )
            values.append(complex(re, im))
    if not values:
        raise SignalFormatError(path, 1, "signal file holds no samples")
    return np.asarray(values, dtype=np.complex128)


def write_sidecar(path, truth: SparseSpectrum, outlier_positions, outlier_values=None) -> None:
    """Ground-truth companion file: spectrum entries and planted outliers."""
    positions = list(int(p) for p in outlier_positions)
    if outlier_values is None:
        outlier_values = [0.0 + 0.0j] * len(positions)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SIDECAR_HEADER)
        for idx, amp in zip(truth.indices, truth.amplitudes):
            writer.writerow(["spectrum", idx, _fmt(amp.real), _fmt(amp.imag)])
        for pos, value in zip(positions, outlier_values):
            value = complex(value)
            writer.writerow(["outlier", pos, _fmt(value.real), _fmt(value.imag)])


def read_sidecar(path, ambient_length: int) -> tuple[SparseSpectrum, np.ndarray]:
    spectrum_indices: list[int] = []
    spectrum_amplitudes: list[complex] = []
    outliers: list[int] = []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for row in reader:
            if not row:
                continue
            kind, idx, re, im = row[0], int(row[1]), float(row[2]), float(row[3])
            if kind == "spectrum":
                spectrum_indices.append(idx)
                spectrum_amplitudes.append(complex(re, im))
            elif kind == "outlier":
                outliers.append(idx)
            else:
                raise ValueError(f"unknown sidecar row kind {kind!r}")
    truth = SparseSpectrum(
        indices=tuple(spectrum_indices),
        amplitudes=np.asarray(spectrum_amplitudes, dtype=np.complex128),
        ambient_length=ambient_length,
    )
    return truth, np.asarray(outliers, dtype=np.intp)


def write_mask(path, inlier_indices: Iterable[int], length: int) -> None:
    """0/1 per sample, 1 where the sample was kept as an inlier."""
    kept = set(int(i) for i in inlier_indices)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MASK_HEADER)
        for idx in range(length):
            writer.writerow([idx, 1 if idx in kept else 0])


def read_mask(path) -> np.ndarray:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        return np.asarray([int(row[1]) for row in reader if row], dtype=np.intp)


def write_run_table(path, result: ExperimentResult) -> None:
    """Per-run records plus the tagged averages row."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RUN_COLUMNS)
        for record in result.records:
            writer.writerow(_format_row(record.row()))
        writer.writerow(_format_row(result.summary_row()))


def _format_row(row: Sequence) -> list[str]:
    out = []
    for cell in row:
        if isinstance(cell, str):
            out.append(cell)
        elif isinstance(cell, (int, np.integer)):
            out.append(str(int(cell)))
        else:
            out.append(_fmt(cell))
    return out


def read_run_table(path) -> tuple[list[dict], dict]:
    """Rows as dicts keyed by column name; the averages row comes back separately."""
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [dict(zip(header, row)) for row in reader if row]
    summary = [r for r in rows if r["run"] == "avg"]
    runs = [r for r in rows if r["run"] != "avg"]
    if len(summary) != 1:
        raise ValueError(f"expected exactly one averages row, found {len(summary)}")
    return runs, summary[0]
