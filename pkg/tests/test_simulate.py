"""Generator reproducibility, distributions, and stream independence."""
import numpy as np
import pytest

from sparsac.simulate import (
    GAUSSIAN_STREAM,
    IMPULSE_STREAM,
    NoiseSpec,
    SignalSpec,
    gen_gaussian_noise,
    gen_impulsive_noise,
    gen_sparse_signal,
    stream_rng,
)
from sparsac.transform import dft


class TestSparseSignal:
    def test_zero_sparsity(self):
        signal, truth = gen_sparse_signal(SignalSpec(length=32, sparsity=0, rng_seed=1))
        assert np.all(signal == 0)
        assert truth.sparsity == 0

    def test_single_tone_has_unit_modulus(self):
        signal, _ = gen_sparse_signal(SignalSpec(length=128, sparsity=1, rng_seed=2))
        np.testing.assert_allclose(np.abs(signal), 1.0, atol=1e-12)

    def test_spectrum_support_matches_truth(self):
        signal, truth = gen_sparse_signal(SignalSpec(length=128, sparsity=5, rng_seed=3))
        spectrum = dft(signal)
        hot = np.flatnonzero(np.abs(spectrum) > 1e-9)
        assert hot.tolist() == list(truth.indices)
        np.testing.assert_allclose(spectrum[hot], truth.amplitudes, rtol=1e-10)

    def test_amplitude_range_respected(self):
        spec = SignalSpec(length=64, sparsity=6, amplitude_range=(0.5, 2.0), rng_seed=4)
        _, truth = gen_sparse_signal(spec)
        magnitudes = np.abs(truth.amplitudes) / 64
        assert np.all(magnitudes >= 0.5) and np.all(magnitudes <= 2.0)

    def test_same_seed_same_signal(self):
        a, _ = gen_sparse_signal(SignalSpec(length=64, sparsity=3, rng_seed=9))
        b, _ = gen_sparse_signal(SignalSpec(length=64, sparsity=3, rng_seed=9))
        assert np.array_equal(a, b)

    def test_invalid_specs_rejected(self):
        with pytest.raises(ValueError):
            SignalSpec(length=4, sparsity=5)
        with pytest.raises(ValueError):
            SignalSpec(length=4, sparsity=2, amplitude_range=(2.0, 1.0))


class TestGaussianNoise:
    def test_zero_sigma_is_silent(self):
        noise = gen_gaussian_noise(64, 0.0, stream_rng(0, GAUSSIAN_STREAM))
        assert np.all(noise == 0)

    def test_per_part_deviation(self):
        noise = gen_gaussian_noise(100_000, 0.5, stream_rng(1, GAUSSIAN_STREAM))
        assert 0.49 <= np.std(noise.real) <= 0.51
        assert 0.49 <= np.std(noise.imag) <= 0.51

    def test_seeding(self):
        a = gen_gaussian_noise(32, 1.0, stream_rng(5, GAUSSIAN_STREAM))
        b = gen_gaussian_noise(32, 1.0, stream_rng(5, GAUSSIAN_STREAM))
        c = gen_gaussian_noise(32, 1.0, stream_rng(6, GAUSSIAN_STREAM))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestImpulsiveNoise:
    def test_zero_count(self):
        noise, positions = gen_impulsive_noise(32, NoiseSpec(outlier_count=0),
                                               stream_rng(0, IMPULSE_STREAM))
        assert np.all(noise == 0)
        assert positions.size == 0

    def test_full_occupancy(self):
        noise, positions = gen_impulsive_noise(16, NoiseSpec(outlier_count=16),
                                               stream_rng(1, IMPULSE_STREAM))
        assert positions.tolist() == list(range(16))
        assert np.all(noise != 0)

    def test_positions_are_distinct_and_in_range(self):
        spec = NoiseSpec(outlier_count=24)
        _, positions = gen_impulsive_noise(128, spec, stream_rng(2, IMPULSE_STREAM))
        assert len(set(positions.tolist())) == 24
        assert positions.min() >= 0 and positions.max() < 128

    def test_offset_dominates_moduli(self):
        medians = []
        for seed in range(30):
            spec = NoiseSpec(outlier_count=16, outlier_offset=100 + 0j)
            noise, positions = gen_impulsive_noise(128, spec, stream_rng(seed, IMPULSE_STREAM))
            medians.append(np.median(np.abs(noise[positions])))
        assert np.median(medians) >= 90.0

    def test_values_only_at_positions(self):
        spec = NoiseSpec(outlier_count=5)
        noise, positions = gen_impulsive_noise(64, spec, stream_rng(3, IMPULSE_STREAM))
        mask = np.zeros(64, dtype=bool)
        mask[positions] = True
        assert np.all(noise[~mask] == 0)

    def test_too_many_outliers_rejected(self):
        with pytest.raises(ValueError):
            gen_impulsive_noise(8, NoiseSpec(outlier_count=9), stream_rng(0, IMPULSE_STREAM))


class TestStreamIndependence:
    def test_outlier_count_does_not_perturb_signal_or_gaussian(self):
        seed = 42
        signal_a, truth_a = gen_sparse_signal(SignalSpec(length=128, sparsity=5, rng_seed=seed))
        signal_b, truth_b = gen_sparse_signal(SignalSpec(length=128, sparsity=5, rng_seed=seed))
        assert np.array_equal(signal_a, signal_b)
        assert truth_a.indices == truth_b.indices

        gauss_a = gen_gaussian_noise(128, 0.5, stream_rng(seed, GAUSSIAN_STREAM))
        gauss_b = gen_gaussian_noise(128, 0.5, stream_rng(seed, GAUSSIAN_STREAM))
        assert np.array_equal(gauss_a, gauss_b)

        # Different purposes under the same master seed stay decorrelated.
        imp_stream = gen_gaussian_noise(128, 0.5, stream_rng(seed, IMPULSE_STREAM))
        assert not np.array_equal(gauss_a, imp_stream)
