"""Dual-tree wavelet transforms: 1D complex, 2D real, 2D complex.

Two filter trees run in parallel. Tree 1 uses the stored first-level and
main filters; tree 2 uses their time-reversed partners at every level. The
2D variants mix the per-tree outputs with an orthonormal sum/difference
butterfly:

    plus = (A + B) / sqrt(2),  minus = (A - B) / sqrt(2)

which is its own inverse. The real 2D transform runs two trees (same
filters on both axes) and butterflies their band triples into six detail
bands per level. The complex 2D transform runs four trees, one per
(row filter, column filter) choice; the butterfly of the matched trees
(11, 22) gives the six real parts and the butterfly of the crossed trees
(12, 21) the six imaginary parts. Per-tree approximations recurse raw and
are kept raw, so each tree stays independently invertible; inverses invert
every tree and average.
"""

import numpy as np

from .autodiff import add, conv_decim, mul, sub, upsample_conv, value_of
from .dwt2d import Bands2D, forward_level, inverse_level, _check_dims, _shape2
from .errors import InvalidArgumentError, InvalidLengthError, StructureError
from .filters import DualTreeFilterSet

_INV_ROOT2 = 1.0 / np.sqrt(2.0)


def butterfly(a, b):
    """Orthonormal sum/difference combination; applying it twice is identity."""
    return (mul(add(a, b), _INV_ROOT2), mul(sub(a, b), _INV_ROOT2))


def _level_filters(fs, tree, level):
    first, main = fs.tree(tree)
    return first if level == 1 else main


class DualTreePyramid1D:
    """Two parallel 1D pyramids; tree 1 is the real part, tree 2 the imaginary.

    details[j-1] is the level-j pair (d1, d2).
    """

    def __init__(self, levels, approxs, details):
        self.levels = int(levels)
        self.approxs = tuple(approxs)
        self.details = [tuple(pair) for pair in details]
        self.validate()

    def validate(self):
        if self.levels < 1 or len(self.details) != self.levels:
            raise StructureError("level count does not match detail bands")
        if len(self.approxs) != 2:
            raise StructureError("expected two tree approximations")
        n = self.details[0][0].shape[-1] * 2
        for j, pair in enumerate(self.details, start=1):
            if len(pair) != 2:
                raise StructureError("level %d does not hold a tree pair" % j)
            for d in pair:
                if d.shape[-1] != n // (1 << j):
                    raise StructureError(
                        "level %d band length %d, expected %d"
                        % (j, d.shape[-1], n // (1 << j)))
        for a in self.approxs:
            if a.shape[-1] != n // (1 << self.levels):
                raise StructureError("approximation length mismatch")

    def magnitude(self, j):
        """Pointwise complex magnitude of the level-j detail pair."""
        d1 = np.asarray(value_of(self.details[j - 1][0]))
        d2 = np.asarray(value_of(self.details[j - 1][1]))
        return np.sqrt(d1 * d1 + d2 * d2)


def dtcwt1d_forward(x, fs, J):
    """Analyze a signal with both trees.

    Parameters
    ----------
    x : ndarray, shape (..., N)
        Signal with N divisible by 2**J.
    fs : DualTreeFilterSet
    J : int
        Level count, >= 1.

    Returns
    -------
    DualTreePyramid1D
    """
    if J < 1:
        raise InvalidArgumentError("level count must be >= 1, got %r" % (J,))
    if isinstance(x, np.ndarray):
        x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    if n % (1 << J) != 0:
        raise InvalidLengthError(
            "signal length %d is not divisible by 2**%d" % (n, J))
    approxs = []
    per_tree = []
    for tree in (1, 2):
        a = x
        details = []
        for level in range(1, J + 1):
            h, g = _level_filters(fs, tree, level)
            details.append(conv_decim(a, g))
            a = conv_decim(a, h)
        approxs.append(a)
        per_tree.append(details)
    pairs = list(zip(per_tree[0], per_tree[1]))
    return DualTreePyramid1D(J, approxs, pairs)


def dtcwt1d_inverse(p, fs):
    """Average of the two per-tree inverse transforms."""
    p.validate()
    recons = []
    for tree in (1, 2):
        a = p.approxs[tree - 1]
        for level in range(p.levels, 0, -1):
            h, g = _level_filters(fs, tree, level)
            d = p.details[level - 1][tree - 1]
            a = add(upsample_conv(a, h), upsample_conv(d, g))
        recons.append(a)
    return mul(add(recons[0], recons[1]), 0.5)


class DualTreePyramidReal2D:
    """Two-tree 2D pyramid with butterflied details.

    details[j-1] is a (plus, minus) pair of Bands2D: the sum and difference
    butterfly outputs of the two trees' band triples. approxs holds the two
    raw per-tree approximations.
    """

    def __init__(self, levels, approxs, details):
        self.levels = int(levels)
        self.approxs = tuple(approxs)
        self.details = [tuple(pair) for pair in details]
        self.validate()

    def validate(self):
        if self.levels < 1 or len(self.details) != self.levels:
            raise StructureError("level count does not match detail bands")
        if len(self.approxs) != 2:
            raise StructureError("expected two tree approximations")
        h0, w0 = _shape2(self.details[0][0].horizontal)
        for j, pair in enumerate(self.details, start=1):
            want = (h0 * 2 // (1 << j), w0 * 2 // (1 << j))
            for group in pair:
                for b in group.as_tuple():
                    if _shape2(b) != want:
                        raise StructureError(
                            "level %d band shape %r, expected %r"
                            % (j, _shape2(b), want))
        for a in self.approxs:
            if _shape2(a) != _shape2(self.details[-1][0].horizontal):
                raise StructureError("approximation shape mismatch")

    def band_matrices(self, j):
        """The six post-butterfly detail matrices of level j."""
        plus, minus = self.details[j - 1]
        return list(plus.as_tuple()) + list(minus.as_tuple())

    def magnitude_squared(self, j, band):
        """Squared response of one of the six bands (1-based index)."""
        if not 1 <= band <= 6:
            raise InvalidArgumentError("band %r out of range [1, 6]" % (band,))
        m = np.asarray(value_of(self.band_matrices(j)[band - 1]))
        return m * m


def _butterfly_bands(b1, b2):
    pairs = [butterfly(x, y) for x, y in zip(b1.as_tuple(), b2.as_tuple())]
    plus = Bands2D(*(p for p, _ in pairs))
    minus = Bands2D(*(m for _, m in pairs))
    return plus, minus


def dtcwt2d_real_forward(x, fs, J):
    """Two-tree separable analysis with butterflied detail bands."""
    if J < 1:
        raise InvalidArgumentError("level count must be >= 1, got %r" % (J,))
    if isinstance(x, np.ndarray):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim < 2:
            raise InvalidLengthError("expected an image, got shape %r"
                                     % (x.shape,))
    _check_dims(x, J)
    a = [x, x]
    details = []
    for level in range(1, J + 1):
        raw = []
        for tree in (1, 2):
            pair = _level_filters(fs, tree, level)
            a[tree - 1], bands = forward_level(a[tree - 1], pair, pair)
            raw.append(bands)
        details.append(_butterfly_bands(raw[0], raw[1]))
    return DualTreePyramidReal2D(J, a, details)


def dtcwt2d_real_inverse(p, fs):
    """Un-butterfly, invert both trees, average."""
    p.validate()
    recons = []
    for tree in (1, 2):
        a = p.approxs[tree - 1]
        for level in range(p.levels, 0, -1):
            plus, minus = p.details[level - 1]
            b1, b2 = _butterfly_bands(plus, minus)
            bands = b1 if tree == 1 else b2
            pair = _level_filters(fs, tree, level)
            a = inverse_level(a, bands, pair, pair)
        recons.append(a)
    return mul(add(recons[0], recons[1]), 0.5)


_TREE_KEYS = ((1, 1), (1, 2), (2, 1), (2, 2))


class ComplexBands2D:
    """One level of complex detail bands as four Bands2D groups.

    real_plus/real_minus hold the butterfly outputs of the matched trees
    (11, 22); imag_plus/imag_minus those of the crossed trees (12, 21).
    Complex band r (1-based, order plus.h, plus.v, plus.d, minus.h,
    minus.v, minus.d) pairs real and imaginary matrices positionally.
    """

    __slots__ = ("real_plus", "real_minus", "imag_plus", "imag_minus")

    def __init__(self, real_plus, real_minus, imag_plus, imag_minus):
        self.real_plus = real_plus
        self.real_minus = real_minus
        self.imag_plus = imag_plus
        self.imag_minus = imag_minus

    def groups(self):
        return (self.real_plus, self.real_minus,
                self.imag_plus, self.imag_minus)

    def matrices(self):
        """All twelve real matrices of this level."""
        out = []
        for group in self.groups():
            out.extend(group.as_tuple())
        return out

    def complex_band(self, band):
        """(real, imag) matrix pair of one of the six bands."""
        if not 1 <= band <= 6:
            raise InvalidArgumentError("band %r out of range [1, 6]" % (band,))
        idx = (band - 1) % 3
        if band <= 3:
            real, imag = self.real_plus, self.imag_plus
        else:
            real, imag = self.real_minus, self.imag_minus
        return real.as_tuple()[idx], imag.as_tuple()[idx]


class DualTreePyramidComplex2D:
    """Four-tree 2D pyramid: six complex detail bands per level.

    details[j-1] is a ComplexBands2D; approxs holds the four raw per-tree
    approximations keyed in the order (11, 12, 21, 22) where the first
    digit picks the row filter tree and the second the column filter tree.
    """

    def __init__(self, levels, approxs, details):
        self.levels = int(levels)
        self.approxs = tuple(approxs)
        self.details = list(details)
        self.validate()

    def validate(self):
        if self.levels < 1 or len(self.details) != self.levels:
            raise StructureError("level count does not match detail bands")
        if len(self.approxs) != 4:
            raise StructureError("expected four tree approximations")
        h0, w0 = _shape2(self.details[0].real_plus.horizontal)
        for j, cb in enumerate(self.details, start=1):
            want = (h0 * 2 // (1 << j), w0 * 2 // (1 << j))
            for m in cb.matrices():
                if _shape2(m) != want:
                    raise StructureError(
                        "level %d band shape %r, expected %r"
                        % (j, _shape2(m), want))
        for a in self.approxs:
            if _shape2(a) != _shape2(self.details[-1].real_plus.horizontal):
                raise StructureError("approximation shape mismatch")

    def band_matrices(self, j):
        """The twelve post-butterfly matrices of level j."""
        return self.details[j - 1].matrices()

    def magnitude_squared(self, j, band):
        """Sum of squared real and imaginary parts of one band."""
        real, imag = self.details[j - 1].complex_band(band)
        r = np.asarray(value_of(real))
        i = np.asarray(value_of(imag))
        return r * r + i * i

    def magnitude(self, j, band):
        return np.sqrt(self.magnitude_squared(j, band))


def dtcwt2d_complex_forward(x, fs, J):
    """Four-tree separable analysis with complex band pairing.

    Tree (i, j) filters rows with tree i's pair and columns with tree j's.
    """
    if J < 1:
        raise InvalidArgumentError("level count must be >= 1, got %r" % (J,))
    if isinstance(x, np.ndarray):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim < 2:
            raise InvalidLengthError("expected an image, got shape %r"
                                     % (x.shape,))
    _check_dims(x, J)
    a = {key: x for key in _TREE_KEYS}
    details = []
    for level in range(1, J + 1):
        raw = {}
        for key in _TREE_KEYS:
            row_tree, col_tree = key
            row_pair = _level_filters(fs, row_tree, level)
            col_pair = _level_filters(fs, col_tree, level)
            a[key], raw[key] = forward_level(a[key], row_pair, col_pair)
        real_plus, real_minus = _butterfly_bands(raw[(1, 1)], raw[(2, 2)])
        imag_plus, imag_minus = _butterfly_bands(raw[(1, 2)], raw[(2, 1)])
        details.append(ComplexBands2D(real_plus, real_minus,
                                      imag_plus, imag_minus))
    return DualTreePyramidComplex2D(
        J, [a[k] for k in _TREE_KEYS], details)


def dtcwt2d_complex_inverse(p, fs):
    """Un-butterfly, invert all four trees, average."""
    p.validate()
    recons = []
    for idx, key in enumerate(_TREE_KEYS):
        row_tree, col_tree = key
        a = p.approxs[idx]
        for level in range(p.levels, 0, -1):
            cb = p.details[level - 1]
            w11, w22 = _butterfly_bands(cb.real_plus, cb.real_minus)
            w12, w21 = _butterfly_bands(cb.imag_plus, cb.imag_minus)
            bands = {(1, 1): w11, (1, 2): w12, (2, 1): w21, (2, 2): w22}[key]
            row_pair = _level_filters(fs, row_tree, level)
            col_pair = _level_filters(fs, col_tree, level)
            a = inverse_level(a, bands, row_pair, col_pair)
        recons.append(a)
    total = add(add(recons[0], recons[1]), add(recons[2], recons[3]))
    return mul(total, 0.25)
