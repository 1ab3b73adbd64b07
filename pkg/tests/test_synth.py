"""Synthetic harmonic signals and oriented sine-field images."""

import numpy as np
import pytest

from dtwave.errors import InvalidArgumentError
from dtwave.synth import SynthConfig, gen_batch, gen_image, gen_signal, harmonic_sum


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        SynthConfig(harmonics=0)
    with pytest.raises(InvalidArgumentError):
        SynthConfig(size=0)


def test_harmonic_sum_matches_closed_form():
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    a = np.array([1.0, 0.0, 1.0])
    phi = np.array([0.1, 0.5, 0.9])
    want = np.sin(t + 0.1) + np.sin(4 * t + 0.9)
    np.testing.assert_allclose(harmonic_sum(t, a, phi), want, atol=1e-12)


def test_seed_pins_the_whole_dataset():
    cfg = SynthConfig(harmonics=4, size=32, seed=7)
    a = gen_batch(5, cfg)
    b = gen_batch(5, cfg)
    np.testing.assert_array_equal(a, b)
    c = gen_batch(5, SynthConfig(harmonics=4, size=32, seed=8))
    assert float(np.abs(a - c).max()) > 1e-6


def test_images_vary_within_a_batch():
    batch = gen_batch(4, SynthConfig(harmonics=4, size=32, seed=0))
    assert batch.shape == (4, 32, 32)
    for i in range(3):
        assert float(np.abs(batch[i] - batch[i + 1]).max()) > 1e-9


def test_image_is_a_single_orientation_field():
    # intensity varies along one drawn direction only, so all gradient
    # vectors are parallel: the gradient covariance is near rank one
    img = gen_image(SynthConfig(harmonics=3, size=64, seed=3))
    gi, gj = np.gradient(img)
    s = np.array([[np.sum(gi * gi), np.sum(gi * gj)],
                  [np.sum(gi * gj), np.sum(gj * gj)]])
    evals = np.linalg.eigvalsh(s)
    assert evals[1] > 0
    assert evals[0] / evals[1] < 1e-3


def test_signal_amplitude_bounded_by_harmonic_count():
    cfg = SynthConfig(harmonics=5, seed=2)
    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    x = gen_signal(t, cfg)
    assert float(np.abs(x).max()) <= 5.0 + 1e-9
    assert float(np.abs(x).max()) > 1e-3


def test_batch_count_validation():
    with pytest.raises(InvalidArgumentError):
        gen_batch(0, SynthConfig())
