"""Monte-Carlo experiment driver.

One scenario bundles the signal/noise model and consensus tunables; running it
executes independent seeded realizations and collects per-run statistics in
the same column layout the result tables use:
N_it, SNR_in, SNR_in0, SNR_out0, SNR_out, D.

Seeding: run r of a scenario derives its own 64-bit seed from
(master_seed, r), and each purpose inside a run (signal support, Gaussian
noise, outlier placement, subset draws) pulls from an independent stream of
that seed, so runs and purposes never share randomness.

Note on sigma: the scenario's ``sigma`` is the deviation of the complex
noise as a whole (E|eps|^2 = sigma^2); each real/imaginary part gets
sigma/sqrt(2). This is the convention under which a K-tone unit-amplitude
signal has SNR_in0 = 10 log10(K / sigma^2).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .metrics import SnrReport, snr_db
from .ransac import (
    RansacConfig,
    default_consensus_threshold,
    default_inlier_bound,
    ransac_denoise,
    robust_sigma,
)
from .recovery import SparseSpectrum, reconstruct_signal
from .simulate import (
    GAUSSIAN_STREAM,
    IMPULSE_STREAM,
    RANSAC_STREAM,
    NoiseSpec,
    SignalSpec,
    gen_gaussian_noise,
    gen_impulsive_noise,
    gen_sparse_signal,
    stream_rng,
)

SUMMARY_TAG = "avg"
RUN_COLUMNS = ("run", "N_it", "SNR_in", "SNR_in0", "SNR_out0", "SNR_out", "D", "consensus")


@dataclass(frozen=True)
class ExperimentScenario:
    """A reproducible denoising experiment.

    ``d`` and ``t`` may be None: the inlier bound then comes from a per-run
    robust (MAD) noise estimate, and the consensus threshold defaults to
    ceil(3N/4). ``sigma`` follows the complex-deviation convention described
    in the module docstring.
    """

    n: int = 128
    k: int = 5
    m: int = 32
    i: int = 0
    sigma: float = 0.0
    offset: complex = 0.0 + 0.0j
    d: float | None = None
    t: int | None = None
    nmax: int = 100_000
    runs: int = 100
    seed: int = 0
    amplitude_range: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.i > self.n:
            raise ValueError(f"outlier count {self.i} exceeds signal length {self.n}")

    @property
    def consensus_threshold(self) -> int:
        return self.t if self.t is not None else default_consensus_threshold(self.n)

    def feasible(self) -> bool:
        """Whether an outlier-free subset can exist at all."""
        return self.m <= self.n - self.i


@dataclass(frozen=True)
class RunRecord:
    """One realization's outcome in table column order."""

    run_index: int
    n_trials: int
    snr_in: float
    snr_in0: float
    snr_out0: float
    snr_out: float
    consensus_size: int
    reached_consensus: bool

    def row(self) -> list:
        return [
            self.run_index,
            self.n_trials,
            self.snr_in,
            self.snr_in0,
            self.snr_out0,
            self.snr_out,
            self.consensus_size,
            int(self.reached_consensus),
        ]


@dataclass(frozen=True)
class ExperimentResult:
    scenario: ExperimentScenario
    records: tuple[RunRecord, ...] = field(repr=False)

    def mean(self, attribute: str) -> float:
        return float(np.mean([float(getattr(r, attribute)) for r in self.records]))

    def summary_row(self) -> list:
        """Arithmetic means of every per-run column, tagged for the CSV."""
        return [
            SUMMARY_TAG,
            self.mean("n_trials"),
            self.mean("snr_in"),
            self.mean("snr_in0"),
            self.mean("snr_out0"),
            self.mean("snr_out"),
            self.mean("consensus_size"),
            self.mean("reached_consensus"),
        ]


def run_seed(master_seed: int, run_index: int) -> int:
    """Stable 64-bit sub-seed for one run of a scenario."""
    words = np.random.SeedSequence([master_seed, run_index]).generate_state(2)
    return (int(words[0]) << 32) | int(words[1])


@dataclass(frozen=True)
class Realization:
    """One synthesized noisy signal with everything needed to score it."""

    clean: np.ndarray = field(repr=False)
    truth: SparseSpectrum = field(repr=False)
    gaussian: np.ndarray = field(repr=False)
    impulses: np.ndarray = field(repr=False)
    outlier_positions: np.ndarray = field(repr=False)
    run_seed: int

    @property
    def noisy(self) -> np.ndarray:
        return self.clean + self.gaussian + self.impulses


def synthesize(scenario: ExperimentScenario, run_index: int) -> Realization:
    """Build run ``run_index`` of the scenario's signal + noise model."""
    seed = run_seed(scenario.seed, run_index)
    per_part_sigma = scenario.sigma / math.sqrt(2.0)
    clean, truth = gen_sparse_signal(
        SignalSpec(length=scenario.n, sparsity=scenario.k,
                   amplitude_range=scenario.amplitude_range, rng_seed=seed)
    )
    gaussian = gen_gaussian_noise(scenario.n, per_part_sigma, stream_rng(seed, GAUSSIAN_STREAM))
    noise_spec = NoiseSpec(gaussian_sigma=per_part_sigma, outlier_count=scenario.i,
                           outlier_offset=scenario.offset)
    impulses, positions = gen_impulsive_noise(
        scenario.n, noise_spec, stream_rng(seed, IMPULSE_STREAM))
    return Realization(clean=clean, truth=truth, gaussian=gaussian, impulses=impulses,
                       outlier_positions=positions, run_seed=seed)


def score_outcome(realization: Realization, outcome) -> SnrReport:
    """SNR bundle of one denoising outcome against the known ground truth."""
    clean = realization.clean
    if outcome.trial_sparse is not None:
        subset_stage = reconstruct_signal(outcome.trial_sparse)
    else:
        subset_stage = realization.noisy
    return SnrReport(
        snr_in=snr_db(clean, realization.noisy),
        snr_in0=snr_db(clean, clean + realization.gaussian),
        snr_out0=snr_db(clean, subset_stage),
        snr_out=snr_db(clean, outcome.reconstructed),
        consensus_size=len(outcome.consensus),
    )


def run_once(scenario: ExperimentScenario, run_index: int) -> RunRecord:
    """Generate one noisy realization, denoise it, and score it."""
    realization = synthesize(scenario, run_index)
    seed = realization.run_seed
    noisy = realization.noisy

    if scenario.d is not None:
        bound = scenario.d
    else:
        bound = default_inlier_bound(robust_sigma(noisy).combined_sigma)
    cfg = RansacConfig(
        subset_size=scenario.m,
        inlier_bound=bound,
        consensus_threshold=scenario.consensus_threshold,
        max_trials=scenario.nmax,
        sparsity=scenario.k,
        rng_seed=seed,
    )
    outcome = ransac_denoise(noisy, cfg, rng=stream_rng(seed, RANSAC_STREAM))
    report = score_outcome(realization, outcome)
    return RunRecord(
        run_index=run_index,
        n_trials=outcome.trials_used,
        snr_in=report.snr_in,
        snr_in0=report.snr_in0,
        snr_out0=report.snr_out0,
        snr_out=report.snr_out,
        consensus_size=report.consensus_size,
        reached_consensus=outcome.reached_consensus,
    )


def run_scenario(scenario: ExperimentScenario) -> ExperimentResult:
    """Execute every run of the scenario, warning first if it is hopeless."""
    if not scenario.feasible():
        warnings.warn(
            f"M={scenario.m} exceeds the N-I={scenario.n - scenario.i} inliers; "
            "no subset can be outlier-free",
            stacklevel=2,
        )
    with warnings.catch_warnings():
        # The K > M/5 reliability warning would otherwise fire once per run.
        warnings.simplefilter("once")
        records = tuple(run_once(scenario, r) for r in range(scenario.runs))
    return ExperimentResult(scenario=scenario, records=records)
