"""Grayscale image files: binary (P5) and ASCII (P2) PGM, 8 or 16 bit,
plus headerless CSV for float data.

PGM holds integers, so float images pass through ``scale_to_gray`` before
writing; the CSV path is lossless (17 significant digits) and is what the
CLI round trip relies on.
"""

import numpy as np

from .errors import InvalidArgumentError, StructureError


def _read_tokens(data):
    # PGM header tokens with '#' comments stripped; yields byte offsets too
    pos = 0
    tokens = []
    while len(tokens) < 4 and pos < len(data):
        c = data[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            end = pos
            while end < len(data) and not data[end:end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    return tokens, pos


def read_pgm(path):
    """Load a P2 or P5 PGM as a float64 array of raw sample values.

    Returns (image, maxval).
    """
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, pos = _read_tokens(data)
    if len(tokens) < 4 or tokens[0] not in (b"P2", b"P5"):
        raise StructureError("not a P2/P5 PGM file: %s" % path)
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError:
        raise StructureError("bad PGM header in %s" % path)
    if not 0 < maxval < 65536:
        raise StructureError("PGM maxval %d out of range" % maxval)
    if tokens[0] == b"P2":
        values = np.array(data[pos:].split(), dtype=np.float64)
        if values.size != width * height:
            raise StructureError(
                "expected %d samples, found %d" % (width * height, values.size))
    else:
        pos += 1  # single whitespace byte after maxval
        dtype = ">u2" if maxval > 255 else np.uint8
        count = width * height
        values = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
        values = values.astype(np.float64)
    if (values > maxval).any():
        raise StructureError("sample exceeds maxval in %s" % path)
    return values.reshape(height, width), maxval


def write_pgm(path, image, maxval=255, ascii_format=False):
    """Write integer-valued samples (clipped and rounded) as PGM."""
    image = np.asarray(image)
    if image.ndim != 2:
        raise InvalidArgumentError("expected a 2D image, got shape %r"
                                   % (image.shape,))
    if not 0 < maxval < 65536:
        raise InvalidArgumentError("maxval %d out of range" % maxval)
    samples = np.clip(np.rint(image), 0, maxval)
    height, width = image.shape
    header = "%s\n%d %d\n%d\n" % ("P2" if ascii_format else "P5",
                                  width, height, maxval)
    with open(path, "wb") as fh:
        if ascii_format:
            fh.write(header.encode("ascii"))
            body = "\n".join(" ".join(str(int(v)) for v in row)
                             for row in samples)
            fh.write(body.encode("ascii") + b"\n")
        else:
            fh.write(header.encode("ascii"))
            dtype = ">u2" if maxval > 255 else np.uint8
            fh.write(samples.astype(dtype).tobytes())


def scale_to_gray(image, maxval=255):
    """Affine rescale of a float image onto [0, maxval].

    A constant image maps to mid-gray.
    """
    image = np.asarray(image, dtype=np.float64)
    lo = image.min()
    hi = image.max()
    if hi == lo:
        return np.full(image.shape, (maxval + 1) // 2, dtype=np.float64)
    return (image - lo) * (maxval / (hi - lo))


def write_csv_matrix(path, values):
    """Headerless CSV, one row per line, lossless float formatting."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    np.savetxt(path, values, fmt="%.16e", delimiter=",")


def read_csv_matrix(path):
    values = np.loadtxt(path, delimiter=",", dtype=np.float64)
    return np.atleast_2d(values)


def read_image_file(path):
    """Image from .pgm (raw samples) or .csv (floats), picked by suffix."""
    if str(path).lower().endswith((".pgm", ".pnm")):
        return read_pgm(path)[0]
    return read_csv_matrix(path)


def read_signal_file(path):
    """1D float signal from a headerless CSV (any shape, flattened)."""
    return read_csv_matrix(path).ravel()
