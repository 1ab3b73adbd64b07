"""Filter construction, derivation rules, and the on-disk filter format.

A filter is a one dimensional float64 array of even length k >= 2.  The whole
dual-tree transform family is defined by two scaling filters:

    h1        tree-1 scaling filter for levels >= 2
    h1_first  tree-1 scaling filter for level 1

Everything else is derived:

    wavelet filter     g[n]  = (-1)^n h[k-1-n]        (mirror rule)
    tree-2 scaling     h2[n] = h1[k-1-n]              (reversal)
    tree-2 level 1     h1_first[k-1-n]                (reversal)

The derivations are implemented with taped primitives, so a DualTreeFilterSet
built from autodiff variables yields derived filters whose gradients flow
back to the two defining filters.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .autodiff import Var, alt_sign, reverse, value_of
from .errors import InvalidLengthError, StructureError

FILTER_MAGIC = "# dtfilter v1"

ROOT2 = float(np.sqrt(2.0))


def as_filter(f) -> np.ndarray:
    """Validate and return a filter as a float64 array.

    Filters must be one dimensional with even length >= 2 and finite taps.
    """
    arr = np.asarray(f, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidLengthError("filter must be one dimensional")
    k = arr.shape[0]
    if k < 2 or k % 2 != 0:
        raise InvalidLengthError(f"filter length must be even and >= 2, got {k}")
    if not np.all(np.isfinite(arr)):
        raise InvalidLengthError("filter taps must be finite")
    return arr


def _check_shape(f):
    shape = f.shape if isinstance(f, Var) else np.shape(f)
    if len(shape) != 1 or shape[0] < 2 or shape[0] % 2 != 0:
        raise InvalidLengthError(f"filter shape {shape} is not a valid even length")


def haar() -> np.ndarray:
    """Length-2 orthonormal scaling filter [1, 1] / sqrt(2)."""
    return np.array([1.0, 1.0]) / ROOT2


def derive_wavelet_filter(h):
    """Mirror rule g[n] = (-1)^n h[k-1-n]."""
    _check_shape(h)
    return alt_sign(reverse(h))


def derive_qshift_partner(h):
    """Tree-2 filter for levels >= 2: the reversed taps h[k-1-n]."""
    _check_shape(h)
    return reverse(h)


def derive_first_level_partner(h):
    """Tree-2 filter for level 1: the reversed taps h[k-1-n].

    First-level filters are close to symmetric about an integer tap index,
    so plain reversal already lands the second tree one sample away from
    the first, which is the offset the deeper q-shift levels expect.
    Explicitly delaying the reversed taps (circular roll or zero padding)
    either wraps a tap and breaks orthogonality or doubles the offset.
    """
    _check_shape(h)
    return reverse(h)


@dataclass
class DualTreeFilterSet:
    """The two defining scaling filters of a dual-tree transform.

    Fields may be numpy arrays or autodiff Vars.  Derived filters are
    recomputed on access so gradients are recorded on the active tape.
    """

    h1: object
    h1_first: object

    def __post_init__(self):
        _check_shape(self.h1)
        _check_shape(self.h1_first)

    @property
    def k(self) -> int:
        return value_of(self.h1).shape[0]

    @property
    def k_first(self) -> int:
        return value_of(self.h1_first).shape[0]

    @property
    def g1(self):
        return derive_wavelet_filter(self.h1)

    @property
    def h2(self):
        return derive_qshift_partner(self.h1)

    @property
    def g2(self):
        return derive_wavelet_filter(self.h2)

    @property
    def g1_first(self):
        return derive_wavelet_filter(self.h1_first)

    @property
    def h2_first(self):
        return derive_first_level_partner(self.h1_first)

    @property
    def g2_first(self):
        return derive_wavelet_filter(self.h2_first)

    def tree(self, index: int):
        """Per-tree filters as ((h_first, g_first), (h, g)) for index 1 or 2."""
        if index == 1:
            return (self.h1_first, self.g1_first), (self.h1, self.g1)
        if index == 2:
            return (self.h2_first, self.g2_first), (self.h2, self.g2)
        raise StructureError(f"tree index must be 1 or 2, got {index}")

    def values(self) -> "DualTreeFilterSet":
        """A plain-array copy (drops any tape association)."""
        return DualTreeFilterSet(
            np.array(value_of(self.h1)), np.array(value_of(self.h1_first))
        )


def write_filter_file(path, taps) -> None:
    """Write taps in the text format ``# dtfilter v1 k=<len>`` + one per line."""
    arr = as_filter(taps)
    lines = [f"{FILTER_MAGIC} k={arr.shape[0]}"]
    lines.extend(f"{v:.16e}" for v in arr)
    Path(path).write_text("\n".join(lines) + "\n")


def read_filter_file(path) -> np.ndarray:
    """Parse a filter file written by write_filter_file."""
    text = Path(path).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(FILTER_MAGIC):
        raise StructureError(f"{path}: missing '{FILTER_MAGIC}' header")
    header = lines[0][len(FILTER_MAGIC) :].strip()
    if not header.startswith("k="):
        raise StructureError(f"{path}: header lacks k=<len> field")
    try:
        k = int(header[2:].split()[0])
    except ValueError as exc:
        raise StructureError(f"{path}: bad tap count in header") from exc
    body = lines[1:]
    if len(body) != k:
        raise StructureError(f"{path}: header says k={k} but found {len(body)} taps")
    try:
        taps = np.array([float(v) for v in body], dtype=np.float64)
    except ValueError as exc:
        raise StructureError(f"{path}: non-numeric tap") from exc
    return as_filter(taps)


def fixtures_dir() -> Path:
    """Directory holding the bundled filter fixtures.

    The DTCWT_FIXTURES environment variable overrides the default location.
    """
    env = os.environ.get("DTCWT_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> np.ndarray:
    """Load ``<fixtures_dir>/<name>.flt`` as a filter."""
    return read_filter_file(fixtures_dir() / f"{name}.flt")


def load_fixture_set(stem: str) -> DualTreeFilterSet:
    """Load the pair ``<stem>_h1`` / ``<stem>_h1_first`` as a filter set."""
    return DualTreeFilterSet(
        h1=load_fixture(f"{stem}_h1"), h1_first=load_fixture(f"{stem}_h1_first")
    )
