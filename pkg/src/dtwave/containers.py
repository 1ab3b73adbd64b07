"""Text containers for coefficient pyramids.

One file holds one pyramid: a header line stating the kind and geometry,
then one comma-separated line per band (matrices flattened row-major).
Bands appear coarsest first (the approximation), then details from the
finest level inward, matching each pyramid class's own ordering. Floats
are written with 17 significant digits, so a save/load round trip is
lossless.
"""

import numpy as np

from .autodiff import value_of
from .dualtree import (ComplexBands2D, DualTreePyramid1D,
                       DualTreePyramidComplex2D, DualTreePyramidReal2D)
from .dwt1d import Pyramid1D
from .dwt2d import Bands2D, Pyramid2D
from .errors import InvalidArgumentError, StructureError


def _row(values):
    return ",".join("%.16e" % v for v in np.asarray(value_of(values)).ravel())


def _bands_1d(pyr):
    if isinstance(pyr, Pyramid1D):
        return [pyr.approx] + list(pyr.details)
    out = list(pyr.approxs)
    for d1, d2 in pyr.details:
        out.extend((d1, d2))
    return out


def _bands_2d(pyr):
    if isinstance(pyr, Pyramid2D):
        out = [pyr.approx]
        for bands in pyr.details:
            out.extend(bands.as_tuple())
        return out
    out = list(pyr.approxs)
    for j in range(1, pyr.levels + 1):
        out.extend(pyr.band_matrices(j))
    return out


def write_pyramid_file(path, pyr):
    """Serialize any pyramid type; the header encodes which one."""
    if isinstance(pyr, (Pyramid1D, DualTreePyramid1D)):
        bands = _bands_1d(pyr)
        fine = pyr.details[0] if isinstance(pyr, Pyramid1D) \
            else pyr.details[0][0]
        n = np.asarray(value_of(fine)).shape[-1] * 2
        header = "# pyr1d J=%d N=%d" % (pyr.levels, n)
        if isinstance(pyr, DualTreePyramid1D):
            header += " trees=2"
        two_d = False
    elif isinstance(pyr, (Pyramid2D, DualTreePyramidReal2D,
                          DualTreePyramidComplex2D)):
        bands = _bands_2d(pyr)
        fine = pyr.details[0].horizontal if isinstance(pyr, Pyramid2D) \
            else pyr.band_matrices(1)[0]
        shape = np.asarray(value_of(fine)).shape
        header = "# pyr2d J=%d H=%d W=%d" % (pyr.levels, shape[-2] * 2,
                                             shape[-1] * 2)
        if isinstance(pyr, DualTreePyramidReal2D):
            header += " trees=2"
        elif isinstance(pyr, DualTreePyramidComplex2D):
            header += " trees=4"
        two_d = True
    else:
        raise InvalidArgumentError("not a pyramid: %r" % (type(pyr),))
    for band in bands:
        if np.asarray(value_of(band)).ndim != (2 if two_d else 1):
            raise InvalidArgumentError(
                "only unbatched pyramids can be serialized")
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for band in bands:
            fh.write(_row(band) + "\n")


def _parse_header(line):
    if not line.startswith("# "):
        raise StructureError("missing pyramid header")
    parts = line[2:].split()
    if not parts or parts[0] not in ("pyr1d", "pyr2d"):
        raise StructureError("unknown pyramid kind in header: %r" % line)
    fields = {}
    for part in parts[1:]:
        if "=" not in part:
            raise StructureError("bad header field %r" % part)
        key, value = part.split("=", 1)
        try:
            fields[key] = int(value)
        except ValueError:
            raise StructureError("non-integer header field %r" % part)
    return parts[0], fields


def _take(rows, count, shape):
    out = []
    for _ in range(count):
        if not rows:
            raise StructureError("pyramid file truncated")
        row = rows.pop(0)
        if row.size != np.prod(shape):
            raise StructureError(
                "band of %d values where %s expected" % (row.size, shape))
        out.append(row.reshape(shape))
    return out


def read_pyramid_file(path):
    """Load a pyramid container, returning the matching pyramid type."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise StructureError("empty pyramid file: %s" % path)
    kind, fields = _parse_header(lines[0])
    rows = [np.array([float(v) for v in ln.split(",")]) for ln in lines[1:]]
    levels = fields.get("J")
    trees = fields.get("trees", 0)
    if levels is None or levels < 1:
        raise StructureError("header missing J")

    def build_1d():
        n = fields.get("N")
        if n is None:
            raise StructureError("header missing N")
        coarse = (n >> levels,)
        if trees == 0:
            approx = _take(rows, 1, coarse)[0]
            details = [_take(rows, 1, (n >> j,))[0]
                       for j in range(1, levels + 1)]
            return Pyramid1D(levels, approx, details)
        if trees != 2:
            raise StructureError("pyr1d supports trees=2, got %d" % trees)
        approxs = tuple(_take(rows, 2, coarse))
        details = [tuple(_take(rows, 2, (n >> j,)))
                   for j in range(1, levels + 1)]
        return DualTreePyramid1D(levels, approxs, details)

    def build_2d():
        height = fields.get("H")
        width = fields.get("W")
        if height is None or width is None:
            raise StructureError("header missing H or W")
        coarse = (height >> levels, width >> levels)

        def level_shape(j):
            return (height >> j, width >> j)

        if trees == 0:
            approx = _take(rows, 1, coarse)[0]
            details = [Bands2D(*_take(rows, 3, level_shape(j)))
                       for j in range(1, levels + 1)]
            return Pyramid2D(levels, approx, details)
        if trees == 2:
            approxs = list(_take(rows, 2, coarse))
            details = [(Bands2D(*_take(rows, 3, level_shape(j))),
                        Bands2D(*_take(rows, 3, level_shape(j))))
                       for j in range(1, levels + 1)]
            return DualTreePyramidReal2D(levels, approxs, details)
        if trees == 4:
            approxs = list(_take(rows, 4, coarse))
            details = []
            for j in range(1, levels + 1):
                groups = [Bands2D(*_take(rows, 3, level_shape(j)))
                          for _ in range(4)]
                details.append(ComplexBands2D(*groups))
            return DualTreePyramidComplex2D(levels, approxs, details)
        raise StructureError("pyr2d supports trees in {2, 4}, got %d" % trees)

    pyr = build_1d() if kind == "pyr1d" else build_2d()
    if rows:
        raise StructureError("%d extra bands after the pyramid" % len(rows))
    pyr.validate()
    return pyr
