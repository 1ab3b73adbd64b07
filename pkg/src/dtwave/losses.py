"""Loss terms for learning dual-tree filters with a sparse autoencoder.

Four terms combine into the training objective:

    reconstruction  mean over the batch of ||x - xhat||_2^2
    sparsity        mean over the batch of the L1 norms of every
                    post-butterfly detail matrix at every level
    constraint      L_w(h1) + L_w(h1_first), where
                    L_w(h) = (||h||_2 - 1)^2 + (mu_h - sqrt(2)/k)^2 + mu_g^2
    gaussian        sum over the six bands of ||G - M^band||_2^2, where
                    M^band is the squared-magnitude impulse response of the
                    band at a fixed scale and G a small centered Gaussian

Every term is built from taped primitives, so evaluating them on a filter
set holding tape variables yields exact reverse-mode gradients.
"""

from dataclasses import dataclass, field

import numpy as np

from .autodiff import add, mean_, mul, sqrt_, sub, sum_, sum_abs, value_of
from .dualtree import (ComplexBands2D, DualTreePyramidComplex2D,
                       DualTreePyramidReal2D, dtcwt2d_complex_forward,
                       dtcwt2d_complex_inverse, dtcwt2d_real_forward,
                       dtcwt2d_real_inverse)
from .dwt2d import Bands2D
from .errors import InvalidArgumentError, InvalidLengthError
from .filters import ROOT2, derive_wavelet_filter, DualTreeFilterSet

VARIANTS = ("real", "complex")


def _check_variant(variant):
    if variant not in VARIANTS:
        raise InvalidArgumentError(
            "variant must be 'real' or 'complex', got %r" % (variant,))


@dataclass
class LossWeights:
    """Trade-off weights of the training objective (all nonnegative)."""

    lambda1: float = 0.1
    lambda2: float = 1.0
    lambda3: float = 4e-4

    def __post_init__(self):
        for name in ("lambda1", "lambda2", "lambda3"):
            if getattr(self, name) < 0:
                raise InvalidArgumentError("%s must be >= 0" % name)

    @classmethod
    def defaults(cls, variant: str) -> "LossWeights":
        """Published settings: lambda3 is 4e-5 real, 4e-4 complex."""
        _check_variant(variant)
        return cls(lambda3=4e-5 if variant == "real" else 4e-4)


@dataclass
class GaussianTarget:
    """Centered circular Gaussian G[i,j] = alpha*exp(-r^2 / (2 sigma^2))."""

    alpha: float = 0.02
    sigma: float = 10.0
    size: int = 64

    @property
    def center(self):
        c = (self.size - 1) / 2.0
        return (c, c)

    def matrix(self) -> np.ndarray:
        i0, j0 = self.center
        i = np.arange(self.size, dtype=np.float64)[:, None]
        j = np.arange(self.size, dtype=np.float64)[None, :]
        r2 = (i - i0) ** 2 + (j - j0) ** 2
        return self.alpha * np.exp(-r2 / (2.0 * self.sigma ** 2))


def loss_wavelet_constraint(h):
    """(||h||_2 - 1)^2 + (mu_h - sqrt(2)/k)^2 + mu_g^2 for the derived g.

    Zero exactly at Haar; nonnegative everywhere.
    """
    k = value_of(h).shape[0]
    norm = sqrt_(sum_(mul(h, h)))
    t_norm = mul(sub(norm, 1.0), sub(norm, 1.0))
    dh = sub(mean_(h), ROOT2 / k)
    t_mean = mul(dh, dh)
    mu_g = mean_(derive_wavelet_filter(h))
    t_wave = mul(mu_g, mu_g)
    return add(add(t_norm, t_mean), t_wave)


def _zero_bands(shape_hw, batch):
    shape = (batch,) + tuple(shape_hw) if batch else tuple(shape_hw)
    return Bands2D(np.zeros(shape), np.zeros(shape), np.zeros(shape))


def _impulse_pyramid_complex(scale, size, batch, part):
    """Zero complex pyramid with units at band centers of the given scale.

    Batch element b carries the unit coefficient of band b+1 in the real
    matrices (part='real') or the imaginary ones (part='imag').
    """
    details = []
    for j in range(1, scale + 1):
        hw = (size >> j, size >> j)
        details.append(ComplexBands2D(*(_zero_bands(hw, batch)
                                        for _ in range(4))))
    cb = details[scale - 1]
    c = (size >> scale) // 2
    plus, minus = ((cb.real_plus, cb.real_minus) if part == "real"
                   else (cb.imag_plus, cb.imag_minus))
    for b in range(batch):
        group = plus if b < 3 else minus
        group.as_tuple()[b % 3][b, c, c] = 1.0
    hw = (size >> scale, size >> scale)
    approxs = [np.zeros((batch,) + hw) for _ in range(4)]
    return DualTreePyramidComplex2D(scale, approxs, details)


def _impulse_pyramid_real(scale, size, batch):
    details = []
    for j in range(1, scale + 1):
        hw = (size >> j, size >> j)
        details.append((_zero_bands(hw, batch), _zero_bands(hw, batch)))
    plus, minus = details[scale - 1]
    c = (size >> scale) // 2
    for b in range(batch):
        group = plus if b < 3 else minus
        group.as_tuple()[b % 3][b, c, c] = 1.0
    hw = (size >> scale, size >> scale)
    approxs = [np.zeros((batch,) + hw) for _ in range(2)]
    return DualTreePyramidReal2D(scale, approxs, details)


def _check_impulse_args(scale, size):
    if scale < 1:
        raise InvalidArgumentError("scale must be >= 1, got %r" % (scale,))
    if size % (1 << scale) != 0:
        raise InvalidLengthError(
            "impulse image size %d not divisible by 2**%d" % (size, scale))


def default_impulse_size(fs, scale, clip=None) -> int:
    """Support of a scale-level synthesis of one coefficient: k * 2**scale.

    Optionally clipped to a training image side length.
    """
    size = fs.k * (1 << scale)
    if clip is not None:
        size = min(size, int(clip))
    return size


def impulse_response_stack(fs, scale, variant="complex", size=None):
    """Band-stacked impulse responses at one scale.

    Returns (R, I) arrays of shape (6, size, size) for the complex variant
    (I is None for the real variant): row b is the inverse transform of a
    unit coefficient centered in band b+1. Taped when fs holds variables.
    """
    _check_variant(variant)
    if size is None:
        size = default_impulse_size(fs, scale)
    _check_impulse_args(scale, size)
    if variant == "real":
        pyr = _impulse_pyramid_real(scale, size, 6)
        return dtcwt2d_real_inverse(pyr, fs), None
    real = dtcwt2d_complex_inverse(
        _impulse_pyramid_complex(scale, size, 6, "real"), fs)
    imag = dtcwt2d_complex_inverse(
        _impulse_pyramid_complex(scale, size, 6, "imag"), fs)
    return real, imag


def impulse_response(fs, band, scale, variant="complex", size=None):
    """Impulse response of one band: an image, or an (R, I) image pair.

    A unit coefficient is placed at the center of band ``band`` (1..6) at
    level ``scale`` of an otherwise zero pyramid, and the inverse transform
    is evaluated. For the complex variant the unit is placed once in the
    real matrix and once in the imaginary one.
    """
    if not 1 <= band <= 6:
        raise InvalidArgumentError("band %r out of range [1, 6]" % (band,))
    r, i = impulse_response_stack(fs, scale, variant, size)
    r = np.asarray(value_of(r))[band - 1]
    if variant == "real":
        return r
    return r, np.asarray(value_of(i))[band - 1]


def magnitude_response(fs, band, scale, variant="complex", size=None):
    """Squared-magnitude image M^band (R^2, plus I^2 for the complex variant)."""
    out = impulse_response(fs, band, scale, variant, size)
    if variant == "real":
        return out * out
    r, i = out
    return r * r + i * i


def loss_gaussian_impulse(fs, target, scale, variant="complex"):
    """Sum over the six bands of ||G - M^band||_2^2 at the given scale."""
    _check_variant(variant)
    size = target.size
    _check_impulse_args(scale, size)
    r, i = impulse_response_stack(fs, scale, variant, size=size)
    m = mul(r, r) if i is None else add(mul(r, r), mul(i, i))
    d = sub(target.matrix()[None, :, :], m)
    return sum_(mul(d, d))


@dataclass
class LossReport:
    """Scalar value of every objective term plus their weighted total.

    Term fields hold the raw (unweighted) values; ``total`` applies the
    weights. ``var`` is the taped total when the evaluation was recorded.
    """

    total: float
    reconstruction: float
    sparsity: float
    constraint: float
    gaussian: float
    var: object = field(default=None, repr=False, compare=False)

    COLUMNS = ("total", "reconstruction", "sparsity", "constraint", "gaussian")

    def as_row(self):
        return [getattr(self, c) for c in self.COLUMNS]


def total_loss(batch, fs, weights, target, variant="complex", levels=4,
               impulse_scale=4):
    """Full training objective over one batch of images.

    Parameters
    ----------
    batch : ndarray, shape (B, H, W)
        Nonempty image batch; H, W divisible by 2**levels.
    fs : DualTreeFilterSet
        Filters (arrays or tape variables).
    weights : LossWeights
    target : GaussianTarget
        Its size fixes the impulse-response image size.
    variant : 'real' or 'complex'
    levels : int
        Autoencoder transform depth.
    impulse_scale : int
        Scale at which band impulse responses are evaluated.

    Returns
    -------
    LossReport
    """
    _check_variant(variant)
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 3 or batch.shape[0] < 1:
        raise InvalidArgumentError(
            "expected a nonempty (B, H, W) batch, got shape %r"
            % (batch.shape,))
    nb = batch.shape[0]
    if variant == "complex":
        pyr = dtcwt2d_complex_forward(batch, fs, levels)
        recon = dtcwt2d_complex_inverse(pyr, fs)
    else:
        pyr = dtcwt2d_real_forward(batch, fs, levels)
        recon = dtcwt2d_real_inverse(pyr, fs)

    diff = sub(recon, batch)
    rec = mul(sum_(mul(diff, diff)), 1.0 / nb)

    sp = None
    for j in range(1, levels + 1):
        for m in pyr.band_matrices(j):
            term = sum_abs(m)
            sp = term if sp is None else add(sp, term)
    sp = mul(sp, 1.0 / nb)

    con = add(loss_wavelet_constraint(fs.h1),
              loss_wavelet_constraint(fs.h1_first))
    gau = loss_gaussian_impulse(fs, target, impulse_scale, variant)

    total = add(add(rec, mul(sp, weights.lambda1)),
                add(mul(con, weights.lambda2), mul(gau, weights.lambda3)))
    return LossReport(
        total=float(value_of(total)),
        reconstruction=float(value_of(rec)),
        sparsity=float(value_of(sp)),
        constraint=float(value_of(con)),
        gaussian=float(value_of(gau)),
        var=total,
    )
