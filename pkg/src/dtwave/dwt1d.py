"""Decimated 1D discrete wavelet transform, forward and inverse.

The forward transform iterates a pair of decimated circular convolutions:
the scaling filter produces the next approximation, the wavelet filter
produces that level's detail band. The inverse runs the adjoint recursion
(zero-upsample, convolve, sum). Both paths accept plain arrays or taped
variables, so an analysis/synthesis pass can be differentiated with respect
to the filter taps.
"""

import numpy as np

from .autodiff import add, conv_decim, upsample_conv, value_of
from .errors import InvalidArgumentError, InvalidLengthError, StructureError
from .filters import as_filter, derive_wavelet_filter
from .multirate import conv_atrous_last


def _band_len(band):
    # works for ndarrays and taped variables alike
    return band.shape[-1]


class Pyramid1D:
    """Multiresolution coefficient stack for a length-N signal.

    Parameters
    ----------
    levels : int
        Decomposition depth J.
    approx : ndarray
        Coarsest approximation band, length N / 2**J.
    details : sequence of ndarray
        Detail bands ordered fine to coarse, d_1 .. d_J; band j has
        length N / 2**j.
    """

    def __init__(self, levels, approx, details):
        self.levels = int(levels)
        self.approx = approx
        self.details = list(details)
        self.validate()

    def validate(self):
        if self.levels < 1 or len(self.details) != self.levels:
            raise StructureError(
                "pyramid declares %d levels but holds %d detail bands"
                % (self.levels, len(self.details)))
        n = _band_len(self.details[0]) * 2
        for j, d in enumerate(self.details, start=1):
            if _band_len(d) * (1 << j) != n * 1:
                raise StructureError(
                    "detail band %d has length %d, expected %d"
                    % (j, _band_len(d), n // (1 << j)))
        if _band_len(self.approx) != _band_len(self.details[-1]):
            raise StructureError(
                "approximation length %d does not match coarsest detail %d"
                % (_band_len(self.approx), _band_len(self.details[-1])))

    @property
    def size(self):
        """Original signal length implied by the band shapes."""
        return _band_len(self.details[0]) * 2

    def values(self):
        """Return a copy with taped variables collapsed to plain arrays."""
        return Pyramid1D(self.levels, value_of(self.approx),
                         [value_of(d) for d in self.details])

    def coefficient_vector(self):
        """All coefficients concatenated coarse-to-fine; length N."""
        parts = [np.asarray(value_of(self.approx))]
        parts.extend(np.asarray(value_of(d)) for d in reversed(self.details))
        return np.concatenate(parts)


def dwt1d_forward(x, h, J):
    """Decompose a signal into J detail bands plus one approximation.

    Parameters
    ----------
    x : ndarray
        Input signal, length divisible by 2**J.
    h : ndarray
        Scaling (lowpass) filter; the wavelet filter is derived from it.
    J : int
        Number of decomposition levels, >= 1.

    Returns
    -------
    Pyramid1D
    """
    if J < 1:
        raise InvalidArgumentError("level count must be >= 1, got %r" % (J,))
    h = as_filter(h)
    if isinstance(x, np.ndarray):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1:
            raise InvalidLengthError("expected a 1D signal, got shape %r"
                                     % (x.shape,))
    n = x.shape[-1]
    if n % (1 << J) != 0:
        raise InvalidLengthError(
            "signal length %d is not divisible by 2**%d" % (n, J))
    g = derive_wavelet_filter(h)
    a = x
    details = []
    for _ in range(J):
        details.append(conv_decim(a, g))
        a = conv_decim(a, h)
    return Pyramid1D(J, a, details)


def dwt1d_inverse(p, h):
    """Reconstruct a signal from its pyramid.

    Exact (to roundoff) when h is orthonormal with the derived wavelet
    filter; approximately learned filters reconstruct to within their
    constraint residuals.
    """
    p.validate()
    h = as_filter(h)
    g = derive_wavelet_filter(h)
    a = p.approx
    for d in reversed(p.details):
        a = add(upsample_conv(a, h), upsample_conv(d, g))
    return a


def undecimated_detail(x, h, j):
    """Full-length level-j detail sequence (no decimation).

    Uses filter dilation: levels below j apply the scaling filter with its
    taps spread by the level's stride, the final stage applies the dilated
    wavelet filter. Subsampling the output at stride 2**j reproduces the
    decimated detail band of :func:`dwt1d_forward` exactly (phase 0).
    """
    if j < 1:
        raise InvalidArgumentError("level must be >= 1, got %r" % (j,))
    h = np.asarray(value_of(as_filter(h)))
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidLengthError("expected a 1D signal, got shape %r"
                                 % (x.shape,))
    g = np.asarray(value_of(derive_wavelet_filter(h)))
    a = x
    for level in range(1, j):
        a = conv_atrous_last(a, h, 1 << (level - 1))
    return conv_atrous_last(a, g, 1 << (j - 1))
