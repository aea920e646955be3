"""Matching-pursuit recovery checked against ground truth and the exhaustive
search oracle."""
import numpy as np
import pytest

from sparsac.recovery import (
    MeasurementSet,
    SearchBudgetError,
    SparseSpectrum,
    exhaustive_l0_oracle,
    measurement_set,
    mp_reconstruct,
    reconstruct_signal,
)
from sparsac.simulate import SignalSpec, gen_sparse_signal
from sparsac.transform import dft


def sample_instance(n, k, m, seed):
    """Noiseless sparse signal plus a random measurement subset of it."""
    signal, truth = gen_sparse_signal(SignalSpec(length=n, sparsity=k, rng_seed=seed))
    rng = np.random.default_rng(seed + 10_000)
    picked = np.sort(rng.choice(n, size=m, replace=False))
    return signal, truth, measurement_set(signal, picked)


class TestMeasurementSet:
    def test_indices_must_increase(self):
        with pytest.raises(ValueError, match="increasing"):
            MeasurementSet(indices=(3, 1), values=np.zeros(2, dtype=np.complex128),
                           ambient_length=8)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="equal length"):
            MeasurementSet(indices=(0, 1), values=np.zeros(3, dtype=np.complex128),
                           ambient_length=8)

    def test_helper_sorts_and_extracts(self):
        signal = np.arange(8, dtype=np.complex128)
        m = measurement_set(signal, [5, 1, 3])
        assert m.indices == (1, 3, 5)
        assert np.allclose(m.values, [1, 3, 5])


class TestMpReconstruct:
    def test_single_tone_exact(self):
        signal, truth, measurements = sample_instance(n=128, k=1, m=4, seed=2)
        recovered = mp_reconstruct(measurements, 1)
        assert recovered.indices == truth.indices
        assert recovered.residual_norm <= 1e-10 * np.linalg.norm(measurements.values)
        assert np.allclose(recovered.amplitudes, truth.amplitudes, rtol=1e-8)

    def test_noiseless_k5_recovery_rate(self):
        hits = 0
        for seed in range(100):
            signal, truth, measurements = sample_instance(n=128, k=5, m=32, seed=seed)
            recovered = mp_reconstruct(measurements, 5)
            y_norm = np.linalg.norm(measurements.values)
            if recovered.residual_norm > 1e-8 * y_norm:
                continue
            if sorted(recovered.indices) != list(truth.indices):
                continue
            order = np.argsort(recovered.indices)
            if np.allclose(recovered.amplitudes[order], truth.amplitudes,
                           rtol=1e-8, atol=1e-8 * np.max(np.abs(truth.amplitudes))):
                hits += 1
        assert hits >= 95

    def test_support_size_and_distinctness(self):
        _, _, measurements = sample_instance(n=64, k=4, m=24, seed=9)
        recovered = mp_reconstruct(measurements, 4)
        assert len(recovered.indices) == 4
        assert len(set(recovered.indices)) == 4

    def test_residual_non_increasing_across_iterations(self):
        # mp with target sparsity j reproduces the state after iteration j,
        # so sweeping j exposes the per-iteration residual path.
        _, _, measurements = sample_instance(n=64, k=5, m=30, seed=21)
        noisy = MeasurementSet(
            indices=measurements.indices,
            values=measurements.values
            + 0.1 * np.random.default_rng(1).normal(size=measurements.size),
            ambient_length=measurements.ambient_length,
        )
        residuals = [mp_reconstruct(noisy, j).residual_norm for j in range(1, 8)]
        for earlier, later in zip(residuals, residuals[1:]):
            assert later <= earlier + 1e-12

    def test_fitted_measurements_match_reconstruction_at_indices(self):
        _, _, measurements = sample_instance(n=64, k=3, m=20, seed=33)
        recovered = mp_reconstruct(measurements, 3)
        time_signal = reconstruct_signal(recovered)
        fitted = time_signal[list(measurements.indices)]
        residual = measurements.values - fitted
        assert abs(np.linalg.norm(residual) - recovered.residual_norm) <= 1e-10

    def test_sparsity_above_measurement_count_rejected(self):
        _, _, measurements = sample_instance(n=32, k=2, m=4, seed=3)
        with pytest.raises(ValueError, match="exceeds measurement count"):
            mp_reconstruct(measurements, 5)

    def test_zero_sparsity_rejected(self):
        _, _, measurements = sample_instance(n=32, k=2, m=4, seed=3)
        with pytest.raises(ValueError, match=">= 1"):
            mp_reconstruct(measurements, 0)

    def test_optional_early_stop_on_residual(self):
        _, _, measurements = sample_instance(n=64, k=2, m=20, seed=40)
        stopped = mp_reconstruct(measurements, 6, residual_threshold=1e-9)
        assert len(stopped.indices) < 6
        assert stopped.residual_norm <= 1e-9


class TestExhaustiveOracle:
    def test_recovers_true_support_exactly(self):
        signal, truth, measurements = sample_instance(n=16, k=2, m=10, seed=7)
        found = exhaustive_l0_oracle(measurements, 2)
        assert tuple(sorted(found.indices)) == truth.indices
        assert found.residual_norm <= 1e-10

    def test_zero_sparsity_rejected(self):
        _, _, measurements = sample_instance(n=16, k=2, m=10, seed=7)
        with pytest.raises(ValueError, match=">= 1"):
            exhaustive_l0_oracle(measurements, 0)

    def test_budget_refusal(self):
        _, _, measurements = sample_instance(n=128, k=5, m=32, seed=1)
        with pytest.raises(SearchBudgetError):
            exhaustive_l0_oracle(measurements, 5)

    def test_oracle_never_worse_than_greedy_on_noisy_data(self):
        rng = np.random.default_rng(55)
        for seed in range(10):
            signal, _, clean = sample_instance(n=16, k=2, m=10, seed=seed)
            noisy = MeasurementSet(
                indices=clean.indices,
                values=clean.values + 0.2 * (rng.normal(size=10) + 1j * rng.normal(size=10)),
                ambient_length=16,
            )
            greedy = mp_reconstruct(noisy, 2)
            brute = exhaustive_l0_oracle(noisy, 2)
            assert brute.residual_norm <= greedy.residual_norm + 1e-12

    def test_agreement_with_greedy_when_greedy_is_exact(self):
        for seed in range(40):
            _, truth, measurements = sample_instance(n=16, k=2, m=10, seed=seed)
            greedy = mp_reconstruct(measurements, 2)
            if greedy.residual_norm > 1e-10 * np.linalg.norm(measurements.values):
                continue
            brute = exhaustive_l0_oracle(measurements, 2)
            assert sorted(greedy.indices) == sorted(brute.indices)


class TestReconstructSignal:
    def test_empty_spectrum_gives_zero_signal(self):
        empty = SparseSpectrum(indices=(), amplitudes=np.zeros(0, dtype=np.complex128),
                               ambient_length=16)
        assert np.all(reconstruct_signal(empty) == 0)

    def test_single_entry_is_basis_function(self):
        n, k0 = 16, 5
        single = SparseSpectrum(indices=(k0,),
                                amplitudes=np.array([n], dtype=np.complex128),
                                ambient_length=n)
        expected = np.exp(2j * np.pi * np.arange(n) * k0 / n)
        assert np.allclose(reconstruct_signal(single), expected, atol=1e-13)

    def test_matches_direct_component_sum(self):
        rng = np.random.default_rng(77)
        n = 128
        bins = np.sort(rng.choice(n, size=5, replace=False))
        amplitudes = rng.normal(size=5) + 1j * rng.normal(size=5)
        spectrum = SparseSpectrum(indices=tuple(int(b) for b in bins),
                                  amplitudes=amplitudes, ambient_length=n)
        direct = np.zeros(n, dtype=np.complex128)
        for k, amp in zip(bins, amplitudes):
            direct += (amp / n) * np.exp(2j * np.pi * np.arange(n) * k / n)
        got = reconstruct_signal(spectrum)
        assert np.linalg.norm(got - direct) <= 1e-12 * np.linalg.norm(direct)

    def test_exact_amplitudes_when_support_found(self):
        # Noiseless measurements + correct support => coefficients match truth.
        for seed in (5, 6, 8):
            signal, truth, measurements = sample_instance(n=128, k=5, m=40, seed=seed)
            recovered = mp_reconstruct(measurements, 5)
            if sorted(recovered.indices) != list(truth.indices):
                continue
            order = np.argsort(recovered.indices)
            np.testing.assert_allclose(recovered.amplitudes[order], truth.amplitudes,
                                       rtol=1e-8)

    def test_spectrum_round_trips_through_dft(self):
        signal, truth, _ = sample_instance(n=64, k=4, m=20, seed=12)
        spectrum = dft(signal)
        np.testing.assert_allclose(spectrum[list(truth.indices)], truth.amplitudes,
                                   rtol=1e-10)
