"""Objective terms: constraint, Gaussian impulse shaping, assembled total."""

import numpy as np
import pytest

from conftest import fixture_filter_set
from dtwave.autodiff import Tape, value_of
from dtwave.errors import InvalidArgumentError, InvalidLengthError
from dtwave.filters import DualTreeFilterSet, derive_wavelet_filter, haar
from dtwave.losses import (GaussianTarget, LossWeights, default_impulse_size,
                           impulse_response, impulse_response_stack,
                           loss_gaussian_impulse, loss_wavelet_constraint,
                           magnitude_response, total_loss)

pmp = pytest.mark.parametrize


def scalar(x):
    return float(value_of(x))


def test_weights_defaults_per_variant():
    wr = LossWeights.defaults("real")
    wc = LossWeights.defaults("complex")
    assert (wr.lambda1, wr.lambda2, wr.lambda3) == (0.1, 1.0, 4e-5)
    assert (wc.lambda1, wc.lambda2, wc.lambda3) == (0.1, 1.0, 4e-4)
    with pytest.raises(InvalidArgumentError):
        LossWeights.defaults("both")


def test_constraint_zero_at_haar():
    assert scalar(loss_wavelet_constraint(haar())) < 1e-30


def test_constraint_matches_hand_formula(rng):
    h = rng.standard_normal(8)
    got = scalar(loss_wavelet_constraint(h))
    g = value_of(derive_wavelet_filter(h))
    want = ((np.linalg.norm(h) - 1.0) ** 2
            + (h.mean() - np.sqrt(2) / 8) ** 2
            + g.mean() ** 2)
    np.testing.assert_allclose(got, want, rtol=1e-12)


def test_gaussian_target_center_and_peak():
    t = GaussianTarget(size=65)
    m = t.matrix()
    assert m.shape == (65, 65)
    assert m[32, 32] == t.alpha  # odd size: the peak is a pixel
    np.testing.assert_allclose(m, m.T, atol=1e-15)
    np.testing.assert_allclose(m, m[::-1, ::-1], atol=1e-15)
    # radius sigma decays by exp(-1/2)
    np.testing.assert_allclose(m[32, 42], t.alpha * np.exp(-0.5), rtol=1e-12)


def test_default_impulse_size_scales_with_filter():
    fs = fixture_filter_set("learned_complex")
    assert default_impulse_size(fs, 3) == 10 * 8
    assert default_impulse_size(fs, 3, clip=64) == 64


def test_impulse_stack_shapes_and_band_selectivity():
    fs = fixture_filter_set("kingsbury_qshift_14")
    r, i = impulse_response_stack(fs, 2, "complex", size=32)
    assert np.asarray(value_of(r)).shape == (6, 32, 32)
    assert np.asarray(value_of(i)).shape == (6, 32, 32)
    rr, ii = impulse_response_stack(fs, 2, "real", size=32), None
    assert np.asarray(value_of(rr[0])).shape == (6, 32, 32)
    assert rr[1] is None


def test_impulse_rows_differ_between_bands():
    fs = fixture_filter_set("kingsbury_qshift_14")
    r, _ = impulse_response_stack(fs, 2, "real", size=32)
    r = np.asarray(value_of(r))
    # horizontal and vertical band atoms are transposes up to sign pattern,
    # never equal
    assert float(np.abs(r[0] - r[1]).max()) > 1e-3


def test_single_band_impulse_matches_stack_row():
    fs = fixture_filter_set("kingsbury_qshift_14")
    r, i = impulse_response_stack(fs, 2, "complex", size=32)
    band3 = impulse_response(fs, 3, 2, "complex", size=32)
    np.testing.assert_allclose(band3[0], np.asarray(value_of(r))[2],
                               atol=1e-14)
    np.testing.assert_allclose(band3[1], np.asarray(value_of(i))[2],
                               atol=1e-14)
    with pytest.raises(InvalidArgumentError):
        impulse_response(fs, 0, 2, "complex", size=32)


def test_magnitude_response_nonnegative_and_consistent():
    fs = fixture_filter_set("learned_complex")
    m = magnitude_response(fs, 1, 3, "complex", size=64)
    assert (m >= 0).all()
    r, i = impulse_response(fs, 1, 3, "complex", size=64)
    np.testing.assert_allclose(m, r * r + i * i, atol=1e-14)


def test_impulse_energy_fraction_of_unit_coefficient():
    # inverting an averaged multi-tree pyramid spreads a unit coefficient
    # over the trees: per-band energies sit in the measured 0.09..0.16
    # range for the complex variant, doubled for the real variant
    fs = fixture_filter_set("learned_complex")
    r, i = impulse_response_stack(fs, 3, "complex")
    m = np.asarray(value_of(r)) ** 2 + np.asarray(value_of(i)) ** 2
    energies = m.sum(axis=(1, 2))
    assert energies.min() > 0.05 and energies.max() < 0.25
    np.testing.assert_allclose(energies[0], 0.155667, atol=1e-4)


def test_gaussian_impulse_loss_value_frozen():
    fs = fixture_filter_set("learned_complex")
    tgt = GaussianTarget(size=default_impulse_size(fs, 4, clip=64))
    got = scalar(loss_gaussian_impulse(fs, tgt, 4, "complex"))
    np.testing.assert_allclose(got, 0.73634363, atol=1e-6)


def test_gaussian_impulse_loss_rejects_bad_size():
    fs = fixture_filter_set("learned_complex")
    with pytest.raises(InvalidLengthError):
        loss_gaussian_impulse(fs, GaussianTarget(size=30), 4, "complex")


def test_total_loss_combines_terms_with_weights(rng):
    batch = rng.standard_normal((2, 16, 16))
    fs = fixture_filter_set("kingsbury_qshift_06")
    w = LossWeights(lambda1=0.3, lambda2=2.0, lambda3=0.05)
    tgt = GaussianTarget(size=16)
    rep = total_loss(batch, fs, w, tgt, "complex", levels=2, impulse_scale=2)
    want = (rep.reconstruction + 0.3 * rep.sparsity
            + 2.0 * rep.constraint + 0.05 * rep.gaussian)
    np.testing.assert_allclose(rep.total, want, rtol=1e-12)
    assert rep.sparsity > 0 and rep.reconstruction >= 0


def test_total_loss_perfect_bank_has_tiny_reconstruction(rng):
    batch = rng.standard_normal((2, 16, 16))
    fs = DualTreeFilterSet(h1=haar(), h1_first=haar())
    rep = total_loss(batch, fs, LossWeights.defaults("real"),
                     GaussianTarget(size=16), "real", levels=2,
                     impulse_scale=2)
    assert rep.reconstruction < 1e-20
    assert rep.constraint < 1e-28


def test_total_loss_taped_end_to_end(rng):
    batch = rng.standard_normal((2, 16, 16))
    tape = Tape()
    fs = DualTreeFilterSet(h1=tape.variable(haar()),
                           h1_first=tape.variable(haar()))
    rep = total_loss(batch, fs, LossWeights.defaults("real"),
                     GaussianTarget(size=16), "real", levels=1,
                     impulse_scale=1)
    g1, gf = tape.gradient(rep.var, [fs.h1, fs.h1_first])
    assert np.isfinite(g1).all() and np.isfinite(gf).all()
    assert float(np.abs(g1).sum()) > 0


def test_total_loss_rejects_bad_batch(rng):
    fs = fixture_filter_set("kingsbury_qshift_06")
    w = LossWeights.defaults("complex")
    with pytest.raises(InvalidArgumentError):
        total_loss(rng.standard_normal((16, 16)), fs, w,
                   GaussianTarget(size=16), "complex")
