"""Consensus denoising for signals sparse in the DFT domain.

Random subsets of a corrupted signal act as compressive-sensing measurements;
a greedy sparse reconstruction from each subset is scored by how many samples
agree with it, and the final signal is re-fit from the largest agreeing set.
"""
from .experiment import (
    ExperimentResult,
    ExperimentScenario,
    Realization,
    RunRecord,
    run_scenario,
    score_outcome,
    synthesize,
)
from .metrics import (
    InfeasibleError,
    SnrReport,
    classic_ransac_trials,
    clean_subset_probability,
    expected_trials,
    predicted_snr_out,
    snr_db,
    snr_improvement_over_subset,
)
from .ransac import (
    DenoiseOutcome,
    NoiseScaleEstimate,
    RansacConfig,
    consensus_set,
    default_consensus_threshold,
    default_inlier_bound,
    mad,
    ransac_denoise,
    robust_sigma,
)
from .recovery import (
    MeasurementSet,
    ReconstructionError,
    SearchBudgetError,
    SparseSpectrum,
    exhaustive_l0_oracle,
    measurement_set,
    mp_reconstruct,
    reconstruct_signal,
)
from .simulate import (
    NoiseSpec,
    SignalSpec,
    gen_gaussian_noise,
    gen_impulsive_noise,
    gen_sparse_signal,
)
from .transform import (
    MeasurementMatrix,
    RankDeficiencyError,
    adjoint_apply,
    dft,
    idft,
    inverse_dft_matrix,
    least_squares_solve,
    partial_measurement_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "DenoiseOutcome",
    "ExperimentResult",
    "ExperimentScenario",
    "InfeasibleError",
    "MeasurementMatrix",
    "MeasurementSet",
    "NoiseScaleEstimate",
    "NoiseSpec",
    "RankDeficiencyError",
    "RansacConfig",
    "Realization",
    "ReconstructionError",
    "RunRecord",
    "SearchBudgetError",
    "SignalSpec",
    "SnrReport",
    "SparseSpectrum",
    "adjoint_apply",
    "classic_ransac_trials",
    "clean_subset_probability",
    "consensus_set",
    "default_consensus_threshold",
    "default_inlier_bound",
    "dft",
    "exhaustive_l0_oracle",
    "expected_trials",
    "gen_gaussian_noise",
    "gen_impulsive_noise",
    "gen_sparse_signal",
    "idft",
    "inverse_dft_matrix",
    "least_squares_solve",
    "mad",
    "measurement_set",
    "mp_reconstruct",
    "partial_measurement_matrix",
    "predicted_snr_out",
    "ransac_denoise",
    "reconstruct_signal",
    "robust_sigma",
    "run_scenario",
    "score_outcome",
    "snr_db",
    "snr_improvement_over_subset",
    "synthesize",
]
