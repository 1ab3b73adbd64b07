"""Filter distance and orientation measurement."""

import numpy as np
import pytest

from dtwave.errors import DegenerateInputError, InvalidArgumentError
from dtwave.filters import haar, load_fixture
from dtwave.metrics import compare_filters, orientation_purity

pmp = pytest.mark.parametrize


def test_distance_zero_on_identical():
    assert compare_filters(haar(), haar()) == 0.0


def test_invariance_under_shift_reversal_and_sign(rng):
    f = rng.standard_normal(10)
    assert compare_filters(f, np.roll(f, 3)) < 1e-12
    assert compare_filters(f, f[::-1]) < 1e-12
    assert compare_filters(f, -f) < 1e-12
    assert compare_filters(f, -np.roll(f[::-1], 5)) < 1e-12


def test_distance_is_scale_free(rng):
    f = rng.standard_normal(8)
    r = rng.standard_normal(8)
    np.testing.assert_allclose(compare_filters(f, r),
                               compare_filters(3.0 * f, 0.5 * r), atol=1e-12)


def test_unequal_lengths_are_tail_padded(rng):
    f = rng.standard_normal(6)
    assert compare_filters(f, np.concatenate([f, np.zeros(4)])) < 1e-12


def test_orthogonal_under_all_shifts_scores_one():
    # constant vs alternating: disjoint frequency support, distance 1
    assert compare_filters([1.0, 1.0], [1.0, -1.0]) == 1.0


def test_distance_bounds(rng):
    for _ in range(20):
        d = compare_filters(rng.standard_normal(8), rng.standard_normal(8))
        assert 0.0 <= d <= 1.0


def test_learned_complex_matches_reference_qshift():
    d = compare_filters(load_fixture("learned_complex_h1"),
                        load_fixture("kingsbury_qshift_06"))
    np.testing.assert_allclose(d, 0.0021353353058743973, atol=1e-15)


def test_compare_degenerate_inputs():
    with pytest.raises(DegenerateInputError):
        compare_filters([], [])
    with pytest.raises(DegenerateInputError):
        compare_filters([0.0, 0.0], [1.0, 2.0])


def test_purity_spanning_ridge_is_pure_and_axis_aligned():
    img = np.zeros((33, 33))
    img[16, :] = 1.0  # full-width horizontal ridge: no endpoints in view
    angle, purity = orientation_purity(img)
    assert purity > 0.9
    assert abs(angle) < 1e-9
    img_v = np.zeros((33, 33))
    img_v[:, 16] = 1.0
    angle_v, purity_v = orientation_purity(img_v)
    assert purity_v > 0.9
    np.testing.assert_allclose(np.degrees(angle_v), 90.0, atol=1e-6)


def test_purity_diagonal_stripes():
    i = np.arange(48)[:, None]
    j = np.arange(48)[None, :]
    img = 1.0 + np.cos((i + j) * (2 * np.pi / 8))
    angle, purity = orientation_purity(img)
    assert purity > 0.9
    np.testing.assert_allclose(np.degrees(angle), 135.0, atol=1.0)


def test_purity_isotropic_gaussian_is_low():
    i = np.arange(64)[:, None] - 31.5
    j = np.arange(64)[None, :] - 31.5
    img = np.exp(-(i * i + j * j) / (2 * 8.0 ** 2))
    _, purity = orientation_purity(img)
    assert purity < 0.05


def test_purity_checkerboard_is_low():
    i = np.arange(32)[:, None]
    j = np.arange(32)[None, :]
    img = ((i + j) % 2).astype(float)
    _, purity = orientation_purity(img)
    assert purity < 0.05


def test_purity_rejects_bad_inputs(rng):
    with pytest.raises(InvalidArgumentError):
        orientation_purity(np.zeros(16))
    with pytest.raises(InvalidArgumentError):
        orientation_purity(-np.ones((4, 4)))
    with pytest.raises(DegenerateInputError):
        orientation_purity(np.zeros((8, 8)))
    with pytest.raises(DegenerateInputError):
        orientation_purity(np.ones((8, 8)))
