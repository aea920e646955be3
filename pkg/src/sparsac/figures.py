"""Render experiment statistics and reconstruction overlays to image files.

Kept separate from the numeric pipeline: nothing here feeds back into the
algorithms, it only draws what the run table already contains.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiment import ExperimentResult


def save_trial_counts(result: ExperimentResult, path) -> Path:
    """Trial count of every realization, with the run average marked."""
    runs = [r.run_index for r in result.records]
    trials = [r.n_trials for r in result.records]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.stem(runs, trials, basefmt=" ")
    ax.axhline(float(np.mean(trials)), color="tab:red", lw=1,
               label=f"average {np.mean(trials):.2f}")
    ax.set_xlabel("realization")
    ax.set_ylabel("subset trials")
    ax.legend(loc="upper right", frameon=False)
    return _save(fig, path)


def save_consensus_sizes(result: ExperimentResult, path) -> Path:
    """Final consensus-set size of every realization."""
    runs = [r.run_index for r in result.records]
    sizes = [r.consensus_size for r in result.records]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.stem(runs, sizes, basefmt=" ")
    ax.axhline(float(np.mean(sizes)), color="tab:red", lw=1,
               label=f"average {np.mean(sizes):.2f}")
    ax.axhline(result.scenario.consensus_threshold, color="tab:gray", lw=1, ls="--",
               label=f"threshold {result.scenario.consensus_threshold}")
    ax.set_xlabel("realization")
    ax.set_ylabel("consensus samples")
    ax.legend(loc="lower right", frameon=False)
    return _save(fig, path)


def save_snr_scatter(result: ExperimentResult, path) -> Path:
    """Input, impulse-free input, and output SNR of every realization."""
    runs = [r.run_index for r in result.records]
    fig, ax = plt.subplots(figsize=(7, 3.6))
    for attribute, label, marker in (
        ("snr_in", "input", "x"),
        ("snr_in0", "input, impulses excluded", "s"),
        ("snr_out", "reconstructed", "o"),
    ):
        values = [getattr(r, attribute) for r in result.records]
        finite = [v for v in values if np.isfinite(v)]
        ax.plot(runs, values, marker, ms=4, ls="none",
                label=f"{label} (avg {np.mean(finite):.2f} dB)" if finite else label)
    ax.set_xlabel("realization")
    ax.set_ylabel("SNR [dB]")
    ax.legend(loc="center right", frameon=False, fontsize=8)
    return _save(fig, path)


def save_reconstruction_overlay(noisy, reconstructed, path, reference=None) -> Path:
    """Real parts of the noisy input, the reconstruction, and optionally the truth."""
    noisy = np.asarray(noisy)
    reconstructed = np.asarray(reconstructed)
    n = np.arange(noisy.size)
    fig, ax = plt.subplots(figsize=(8, 3.6))
    ax.plot(n, noisy.real, "rx", ms=5, label="noisy")
    ax.plot(n, reconstructed.real, "go", ms=4, mfc="none", label="reconstructed")
    if reference is not None:
        ax.plot(n, np.asarray(reference).real, "k.", ms=3, label="original")
    ax.set_xlabel("sample")
    ax.set_ylabel("real part")
    ax.legend(loc="upper right", frameon=False, fontsize=8)
    return _save(fig, path)


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
