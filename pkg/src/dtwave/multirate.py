"""Periodic multirate filtering kernels.

Two operations underpin every transform in this package, both with circular
(periodic) boundary handling and float64 arithmetic:

    analyze:   out[p] = sum_m f[m] * a[(m + 2*p) % N]      (correlate, keep even phase)
    synthesize: out[n] = sum_p f[(n - 2*p) % N] * c[p]      (zero-upsample, convolve)

The second is the exact adjoint of the first, so for any a, f, c

    <analyze(a, f), c> == <a, synthesize(c, f)>

holds to rounding error.  The module level functions ending in ``_last``
operate along the last axis of an arbitrarily batched array and accept any
filter length (a filter longer than the signal wraps around, equivalent to
filtering with its period-N folding).  The public single-signal wrappers
enforce the stricter documented preconditions.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import InvalidArgumentError, InvalidLengthError, UnsupportedSizeError


def _as_f64(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def _extend_right(x: np.ndarray, count: int) -> np.ndarray:
    """Append ``count`` circularly wrapped samples along the last axis."""
    if count == 0:
        return x
    n = x.shape[-1]
    idx = np.arange(count) % n
    return np.concatenate([x, x[..., idx]], axis=-1)


def _extend_left(x: np.ndarray, count: int) -> np.ndarray:
    if count == 0:
        return x
    n = x.shape[-1]
    idx = np.arange(-count, 0) % n
    return np.concatenate([x[..., idx], x], axis=-1)


def conv_decim_last(x: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Decimated periodic correlation along the last axis.

    out[..., p] = sum_m f[m] * x[..., (m + 2p) % N], for p in [0, N//2).
    """
    x = _as_f64(x)
    f = _as_f64(f)
    n = x.shape[-1]
    k = f.shape[0]
    ext = _extend_right(x, k - 1)
    win = sliding_window_view(ext, k, axis=-1)[..., 0 : n : 2, :]
    return win @ f


def upsample_conv_last(c: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Zero-upsample then periodically convolve along the last axis.

    out[..., p] = sum_n f[p - 2n] * c[..., n], output length 2*M.
    """
    c = _as_f64(c)
    f = _as_f64(f)
    m = c.shape[-1]
    n = 2 * m
    k = f.shape[0]
    u = np.zeros(c.shape[:-1] + (n,), dtype=np.float64)
    u[..., ::2] = c
    ext = _extend_left(u, k - 1)
    win = sliding_window_view(ext, k, axis=-1)
    return win @ f[::-1].copy()


def conv_decim_fgrad_last(x: np.ndarray, cot: np.ndarray, k: int) -> np.ndarray:
    """Gradient of conv_decim_last w.r.t. the filter taps.

    Returns g with g[m] = sum over batch and p of cot[..., p] * x[..., (m + 2p) % N].
    """
    x = _as_f64(x)
    cot = _as_f64(cot)
    n = x.shape[-1]
    ext = _extend_right(x, k - 1)
    win = sliding_window_view(ext, k, axis=-1)[..., 0 : n : 2, :]
    # einsum cannot reduce over "..." dims, so flatten them first
    return np.einsum("bpk,bp->k", win.reshape(-1, win.shape[-2], k),
                     cot.reshape(-1, cot.shape[-1]))


def upsample_conv_fgrad_last(c: np.ndarray, cot: np.ndarray, k: int) -> np.ndarray:
    """Gradient of upsample_conv_last w.r.t. the filter taps."""
    c = _as_f64(c)
    cot = _as_f64(cot)
    m = c.shape[-1]
    n = 2 * m
    u = np.zeros(c.shape[:-1] + (n,), dtype=np.float64)
    u[..., ::2] = c
    ext = _extend_left(u, k - 1)
    win = sliding_window_view(ext, k, axis=-1)
    flat = np.einsum("bpk,bp->k", win.reshape(-1, win.shape[-2], k),
                     cot.reshape(-1, cot.shape[-1]))
    return flat[::-1].copy()


def conv_decim_axis(x: np.ndarray, f: np.ndarray, axis: int) -> np.ndarray:
    if axis in (-1, x.ndim - 1):
        return conv_decim_last(x, f)
    moved = np.moveaxis(x, axis, -1)
    return np.moveaxis(conv_decim_last(moved, f), -1, axis)


def upsample_conv_axis(c: np.ndarray, f: np.ndarray, axis: int) -> np.ndarray:
    if axis in (-1, c.ndim - 1):
        return upsample_conv_last(c, f)
    moved = np.moveaxis(c, axis, -1)
    return np.moveaxis(upsample_conv_last(moved, f), -1, axis)


def circular_convolve_decimate(a, f) -> np.ndarray:
    """Filter a periodic signal and keep the even output phase.

    Parameters
    ----------
    a : array_like, shape (N,)
        Input signal, N even and N >= len(f).
    f : array_like, shape (k,)
        Filter taps.

    Returns
    -------
    ndarray, shape (N//2,)
        out[p] = sum_m f[m] * a[(m + 2p) % N].
    """
    a = _as_f64(a)
    f = _as_f64(f)
    if a.ndim != 1 or f.ndim != 1:
        raise InvalidArgumentError("expected one dimensional signal and filter")
    n = a.shape[0]
    if n % 2 != 0:
        raise InvalidLengthError(f"signal length {n} is odd")
    if f.shape[0] > n:
        raise UnsupportedSizeError(
            f"filter length {f.shape[0]} exceeds signal length {n}"
        )
    return conv_decim_last(a, f)


def upsample_convolve_accumulate(c, f, acc) -> np.ndarray:
    """Zero-upsample c, convolve periodically with f, add onto acc.

    acc must have exactly twice the length of c.  Returns a new array;
    the inputs are never modified.
    """
    c = _as_f64(c)
    f = _as_f64(f)
    acc = _as_f64(acc)
    if c.ndim != 1 or f.ndim != 1 or acc.ndim != 1:
        raise InvalidArgumentError("expected one dimensional arrays")
    if acc.shape[0] != 2 * c.shape[0]:
        raise InvalidLengthError(
            f"accumulator length {acc.shape[0]} != 2 * {c.shape[0]}"
        )
    return acc + upsample_conv_last(c, f)


def conv_atrous_last(x: np.ndarray, f: np.ndarray, dilation: int) -> np.ndarray:
    """Undecimated periodic correlation with a dilated filter.

    out[..., p] = sum_n f[n] * x[..., (p + dilation*n) % N].  With dilation
    2**(j-1) this is one stage of the stationary (a trous) transform; its
    stride-2**j subsamples coincide with the decimated pyramid's bands.
    """
    x = _as_f64(x)
    f = _as_f64(f)
    out = np.zeros_like(x)
    for i, tap in enumerate(f):
        out += tap * np.roll(x, -dilation * i, axis=-1)
    return out


def quantize_uniform(x, levels: int) -> np.ndarray:
    """Quantize to the nearest of ``levels`` values evenly spanning [min, max].

    A constant input is returned unchanged.  The operation is idempotent:
    quantizing an already quantized array returns it bit for bit.
    """
    if levels < 2:
        raise InvalidArgumentError(f"need at least 2 quantization levels, got {levels}")
    x = _as_f64(x)
    lo = float(x.min())
    hi = float(x.max())
    if hi == lo:
        return x.copy()
    step = (hi - lo) / (levels - 1)
    return lo + np.round((x - lo) / step) * step
