"""Separable 2D discrete wavelet transform with coefficient tiling.

Each level filters along the column direction (second-to-last axis) first,
then along the row direction (last axis), with decimation after each pass.
Lowpass/lowpass feeds the next level; the three remaining combinations are
that level's detail bands:

    horizontal = row-lowpass  of column-highpass   (responds to horizontal edges)
    vertical   = row-highpass of column-lowpass    (responds to vertical edges)
    diagonal   = row-highpass of column-highpass

Arrays may carry leading batch axes; the transform applies to the trailing
two. Inputs may also be taped variables, making the whole pipeline
differentiable with respect to the filter taps.
"""

import numpy as np

from .autodiff import add, conv_decim, upsample_conv, value_of
from .errors import InvalidArgumentError, InvalidLengthError, StructureError
from .filters import as_filter, derive_wavelet_filter


def _shape2(x):
    return tuple(x.shape[-2:])


class Bands2D:
    """The three detail bands of one decomposition level."""

    __slots__ = ("horizontal", "vertical", "diagonal")

    def __init__(self, horizontal, vertical, diagonal):
        self.horizontal = horizontal
        self.vertical = vertical
        self.diagonal = diagonal

    def as_tuple(self):
        return (self.horizontal, self.vertical, self.diagonal)

    def values(self):
        return Bands2D(*(value_of(b) for b in self.as_tuple()))


class Pyramid2D:
    """Coefficient stack of a separable 2D transform.

    details[j-1] holds level j's bands; shapes halve per level and the
    approximation matches the coarsest detail shape.
    """

    def __init__(self, levels, approx, details):
        self.levels = int(levels)
        self.approx = approx
        self.details = list(details)
        self.validate()

    def validate(self):
        if self.levels < 1 or len(self.details) != self.levels:
            raise StructureError(
                "pyramid declares %d levels but holds %d detail levels"
                % (self.levels, len(self.details)))
        h0, w0 = _shape2(self.details[0].horizontal)
        for j, bands in enumerate(self.details, start=1):
            want = (h0 * 2 // (1 << j), w0 * 2 // (1 << j))
            for name in ("horizontal", "vertical", "diagonal"):
                got = _shape2(getattr(bands, name))
                if got != want:
                    raise StructureError(
                        "level %d %s band has shape %r, expected %r"
                        % (j, name, got, want))
        if _shape2(self.approx) != _shape2(self.details[-1].horizontal):
            raise StructureError(
                "approximation shape %r does not match coarsest bands %r"
                % (_shape2(self.approx),
                   _shape2(self.details[-1].horizontal)))

    @property
    def shape(self):
        """Original image (H, W) implied by the band shapes."""
        h0, w0 = _shape2(self.details[0].horizontal)
        return (2 * h0, 2 * w0)

    def values(self):
        return Pyramid2D(self.levels, value_of(self.approx),
                         [b.values() for b in self.details])

    def map_bands(self, fn):
        """Apply fn to every band (approx included), keeping the structure."""
        return Pyramid2D(
            self.levels, fn(self.approx),
            [Bands2D(*(fn(b) for b in bands.as_tuple()))
             for bands in self.details])


def _check_dims(x, J):
    hw = _shape2(x)
    for n in hw:
        if n % (1 << J) != 0:
            raise InvalidLengthError(
                "image dims %r not divisible by 2**%d" % (hw, J))


def forward_level(a, row_filters, col_filters):
    """One analysis level with independent row/column filter pairs.

    row_filters and col_filters are (lowpass, highpass) pairs applied along
    the last and second-to-last axes respectively. Returns (approx, Bands2D).
    """
    hr, gr = row_filters
    hc, gc = col_filters
    lo = conv_decim(a, hc, axis=-2)
    hi = conv_decim(a, gc, axis=-2)
    approx = conv_decim(lo, hr, axis=-1)
    vertical = conv_decim(lo, gr, axis=-1)
    horizontal = conv_decim(hi, hr, axis=-1)
    diagonal = conv_decim(hi, gr, axis=-1)
    return approx, Bands2D(horizontal, vertical, diagonal)


def inverse_level(approx, bands, row_filters, col_filters):
    """Adjoint of :func:`forward_level`; returns the finer approximation."""
    hr, gr = row_filters
    hc, gc = col_filters
    lo = add(upsample_conv(approx, hr, axis=-1),
             upsample_conv(bands.vertical, gr, axis=-1))
    hi = add(upsample_conv(bands.horizontal, hr, axis=-1),
             upsample_conv(bands.diagonal, gr, axis=-1))
    return add(upsample_conv(lo, hc, axis=-2),
               upsample_conv(hi, gc, axis=-2))


def dwt2d_forward(x, h, J):
    """Separable decomposition of an image into J levels.

    Parameters
    ----------
    x : ndarray, shape (..., H, W)
        Image (or batch of images); H and W divisible by 2**J.
    h : ndarray
        Scaling filter used along both axes.
    J : int
        Level count, >= 1.

    Returns
    -------
    Pyramid2D
    """
    if J < 1:
        raise InvalidArgumentError("level count must be >= 1, got %r" % (J,))
    h = as_filter(h)
    if isinstance(x, np.ndarray):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim < 2:
            raise InvalidLengthError("expected an image, got shape %r"
                                     % (x.shape,))
    _check_dims(x, J)
    g = derive_wavelet_filter(h)
    a = x
    details = []
    for _ in range(J):
        a, bands = forward_level(a, (h, g), (h, g))
        details.append(bands)
    return Pyramid2D(J, a, details)


def dwt2d_inverse(p, h):
    """Reconstruct the image from its pyramid."""
    p.validate()
    h = as_filter(h)
    g = derive_wavelet_filter(h)
    a = p.approx
    for bands in reversed(p.details):
        a = inverse_level(a, bands, (h, g), (h, g))
    return a


def _zeroed_like(p):
    return p.map_bands(lambda b: np.zeros_like(np.asarray(value_of(b))))


def reconstruct_single_level(p, h, j):
    """Inverse of the pyramid with every band zeroed except level j's details."""
    if not 1 <= j <= p.levels:
        raise InvalidArgumentError(
            "level %r out of range [1, %d]" % (j, p.levels))
    q = _zeroed_like(p)
    q.details[j - 1] = p.details[j - 1].values()
    return dwt2d_inverse(q, h)


def reconstruct_approx(p, h):
    """Inverse of the pyramid with all detail bands zeroed."""
    q = _zeroed_like(p)
    q.approx = np.asarray(value_of(p.approx))
    return dwt2d_inverse(q, h)


def tile_coefficients(p):
    """Pack all bands into one H x W image, approximation top-left.

    Each level's bands occupy an L-shape around the coarser block:
    [[coarser, horizontal], [vertical, diagonal]].
    """
    p = p.values()
    tile = np.asarray(p.approx)
    if tile.ndim != 2:
        raise InvalidArgumentError("tiling requires unbatched 2D bands")
    for bands in reversed(p.details):
        top = np.concatenate([tile, bands.horizontal], axis=1)
        bot = np.concatenate([bands.vertical, bands.diagonal], axis=1)
        tile = np.concatenate([top, bot], axis=0)
    return tile


def untile_coefficients(img, J):
    """Inverse of :func:`tile_coefficients` for a J-level tiling."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise InvalidArgumentError("expected a 2D tiled image")
    _check_dims(img, J)
    details = []
    block = img
    for _ in range(J):
        h2, w2 = block.shape[0] // 2, block.shape[1] // 2
        details.append(Bands2D(block[:h2, w2:].copy(),
                               block[h2:, :w2].copy(),
                               block[h2:, w2:].copy()))
        block = block[:h2, :w2]
    return Pyramid2D(J, block.copy(), details)
