"""Minimal reverse mode automatic differentiation over numpy arrays.

A Tape records primitive applications as an append-only list of nodes.  Each
node stores its forward value plus one vector-Jacobian product callback per
differentiable operand.  Calling ``Tape.gradient`` walks the node list once
in reverse, accumulating cotangents.

Every primitive in this module accepts either a ``Var`` (recorded on a tape)
or a plain array / scalar (treated as a constant).  When no operand is a
``Var`` the primitive simply returns a numpy array, so transform code written
against these functions runs untaped at full speed.

The convolution primitives are adjoint pairs: the input gradient of the
decimating correlation is the upsampling convolution with the same filter,
and vice versa.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import multirate
from .errors import InvalidArgumentError, NumericError

__all__ = [
    "Tape",
    "Var",
    "value_of",
    "conv_decim",
    "upsample_conv",
    "add",
    "sub",
    "mul",
    "sqrt_",
    "sum_",
    "sum_abs",
    "mean_",
    "reverse",
    "alt_sign",
    "roll",
    "pad_zero",
]


class _Node:
    __slots__ = ("op", "value", "parents", "vjps")

    def __init__(self, op, value, parents, vjps):
        self.op = op
        self.value = value
        self.parents = parents
        self.vjps = vjps


class Var:
    """Handle to one node of a Tape."""

    __slots__ = ("tape", "index")

    def __init__(self, tape: "Tape", index: int):
        self.tape = tape
        self.index = index

    @property
    def value(self) -> np.ndarray:
        return self.tape._nodes[self.index].value

    @property
    def shape(self):
        return self.value.shape

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __neg__(self):
        return mul(self, -1.0)

    def __repr__(self):
        return f"Var(node={self.index}, shape={self.value.shape})"


class Tape:
    """Append-only record of primitive applications."""

    __slots__ = ("_nodes",)

    def __init__(self):
        self._nodes = []

    def __len__(self):
        return len(self._nodes)

    def variable(self, value, op: str = "input") -> Var:
        """Register an array as a differentiable leaf."""
        return self._record(op, np.asarray(value, dtype=np.float64), ())

    def _record(self, op, value, parts) -> Var:
        parents = tuple(v.index for v, _ in parts)
        vjps = tuple(fn for _, fn in parts)
        self._nodes.append(_Node(op, value, parents, vjps))
        return Var(self, len(self._nodes) - 1)

    def gradient(
        self,
        output: Var,
        wrt: Sequence[Var],
        check_finite: bool = False,
    ) -> list[np.ndarray]:
        """Cotangents of a scalar output with respect to ``wrt`` leaves.

        One reverse sweep over the recorded nodes.  With ``check_finite``
        every intermediate cotangent is validated and a NumericError names
        the offending node.
        """
        if output.tape is not self:
            raise InvalidArgumentError("output does not belong to this tape")
        out_value = output.value
        if out_value.ndim != 0:
            raise InvalidArgumentError("gradient target must be scalar")
        keep = {}
        for v in wrt:
            if v.tape is not self:
                raise InvalidArgumentError("wrt variable from a different tape")
            keep[v.index] = None
        grads: list = [None] * (output.index + 1)
        grads[output.index] = np.ones((), dtype=np.float64)
        for i in range(output.index, -1, -1):
            g = grads[i]
            grads[i] = None
            if g is None:
                continue
            node = self._nodes[i]
            if check_finite and not np.all(np.isfinite(g)):
                raise NumericError(f"non-finite cotangent at node {i} ({node.op})")
            if i in keep:
                keep[i] = g if keep[i] is None else keep[i] + g
            for parent, vjp in zip(node.parents, node.vjps):
                pg = vjp(g)
                grads[parent] = pg if grads[parent] is None else grads[parent] + pg
        out = []
        for v in wrt:
            g = keep[v.index]
            out.append(np.zeros_like(v.value) if g is None else np.asarray(g))
        return out


def value_of(x) -> np.ndarray:
    """Forward value of a Var, or the argument coerced to float64."""
    if isinstance(x, Var):
        return x.value
    return np.asarray(x, dtype=np.float64)


def _tape_of(*args):
    tape = None
    for a in args:
        if isinstance(a, Var):
            if tape is None:
                tape = a.tape
            elif tape is not a.tape:
                raise InvalidArgumentError("operands recorded on different tapes")
    return tape


def _unbroadcast(g: np.ndarray, shape) -> np.ndarray:
    """Sum a cotangent down to ``shape`` (undo numpy broadcasting)."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


def conv_decim(x, f, axis: int = -1):
    """Decimated periodic correlation along ``axis`` (taped when needed)."""
    xv = value_of(x)
    fv = value_of(f)
    y = multirate.conv_decim_axis(xv, fv, axis)
    tape = _tape_of(x, f)
    if tape is None:
        return y
    parts = []
    if isinstance(x, Var):
        parts.append(
            (x, lambda g, fv=fv, axis=axis: multirate.upsample_conv_axis(g, fv, axis))
        )
    if isinstance(f, Var):
        k = fv.shape[0]

        def fgrad(g, xv=xv, k=k, axis=axis):
            xm = np.moveaxis(xv, axis, -1)
            gm = np.moveaxis(g, axis, -1)
            return multirate.conv_decim_fgrad_last(xm, gm, k)

        parts.append((f, fgrad))
    return tape._record("conv_decim", y, parts)


def upsample_conv(c, f, axis: int = -1):
    """Zero-upsample then periodically convolve along ``axis``."""
    cv = value_of(c)
    fv = value_of(f)
    y = multirate.upsample_conv_axis(cv, fv, axis)
    tape = _tape_of(c, f)
    if tape is None:
        return y
    parts = []
    if isinstance(c, Var):
        parts.append(
            (c, lambda g, fv=fv, axis=axis: multirate.conv_decim_axis(g, fv, axis))
        )
    if isinstance(f, Var):
        k = fv.shape[0]

        def fgrad(g, cv=cv, k=k, axis=axis):
            cm = np.moveaxis(cv, axis, -1)
            gm = np.moveaxis(g, axis, -1)
            return multirate.upsample_conv_fgrad_last(cm, gm, k)

        parts.append((f, fgrad))
    return tape._record("upsample_conv", y, parts)


def add(a, b):
    av = value_of(a)
    bv = value_of(b)
    y = av + bv
    tape = _tape_of(a, b)
    if tape is None:
        return y
    parts = []
    if isinstance(a, Var):
        parts.append((a, lambda g, s=av.shape: _unbroadcast(g, s)))
    if isinstance(b, Var):
        parts.append((b, lambda g, s=bv.shape: _unbroadcast(g, s)))
    return tape._record("add", y, parts)


def sub(a, b):
    av = value_of(a)
    bv = value_of(b)
    y = av - bv
    tape = _tape_of(a, b)
    if tape is None:
        return y
    parts = []
    if isinstance(a, Var):
        parts.append((a, lambda g, s=av.shape: _unbroadcast(g, s)))
    if isinstance(b, Var):
        parts.append((b, lambda g, s=bv.shape: _unbroadcast(-g, s)))
    return tape._record("sub", y, parts)


def mul(a, b):
    av = value_of(a)
    bv = value_of(b)
    y = av * bv
    tape = _tape_of(a, b)
    if tape is None:
        return y
    parts = []
    if isinstance(a, Var):
        parts.append((a, lambda g, o=bv, s=av.shape: _unbroadcast(g * o, s)))
    if isinstance(b, Var):
        parts.append((b, lambda g, o=av, s=bv.shape: _unbroadcast(g * o, s)))
    return tape._record("mul", y, parts)


def sqrt_(a):
    av = value_of(a)
    y = np.sqrt(av)
    tape = _tape_of(a)
    if tape is None:
        return y
    return tape._record("sqrt", y, [(a, lambda g, y=y: g * (0.5 / y))])


def sum_(a):
    av = value_of(a)
    y = np.asarray(av.sum())
    tape = _tape_of(a)
    if tape is None:
        return y
    return tape._record(
        "sum", y, [(a, lambda g, s=av.shape: np.broadcast_to(g, s))]
    )


def sum_abs(a):
    """Sum of absolute values (L1 norm of the flattened array)."""
    av = value_of(a)
    y = np.asarray(np.abs(av).sum())
    tape = _tape_of(a)
    if tape is None:
        return y
    return tape._record("sum_abs", y, [(a, lambda g, sg=np.sign(av): g * sg)])


def mean_(a):
    av = value_of(a)
    n = float(av.size)
    return mul(sum_(a), 1.0 / n)


def reverse(f):
    """Reverse tap order of a one dimensional filter."""
    fv = value_of(f)
    y = fv[::-1].copy()
    tape = _tape_of(f)
    if tape is None:
        return y
    return tape._record("reverse", y, [(f, lambda g: g[::-1].copy())])


def alt_sign(f):
    """Negate the odd-indexed taps: out[n] = (-1)^n * f[n]."""
    fv = value_of(f)
    mask = np.where(np.arange(fv.shape[0]) % 2 == 0, 1.0, -1.0)
    y = fv * mask
    tape = _tape_of(f)
    if tape is None:
        return y
    return tape._record("alt_sign", y, [(f, lambda g, m=mask: g * m)])


def roll(f, shift: int):
    """Circularly shift a one dimensional filter."""
    fv = value_of(f)
    y = np.roll(fv, shift)
    tape = _tape_of(f)
    if tape is None:
        return y
    return tape._record("roll", y, [(f, lambda g, s=shift: np.roll(g, -s))])


def pad_zero(f, left: int, right: int):
    """Surround a one dimensional filter with zero taps.

    Padding on the left realizes a pure sample delay of the filter, which
    keeps a perfect-reconstruction pair exact (unlike a circular roll of
    the tap array, which wraps the end taps around).
    """
    fv = value_of(f)
    k = fv.shape[0]
    y = np.zeros(k + left + right, dtype=np.float64)
    y[left:left + k] = fv
    tape = _tape_of(f)
    if tape is None:
        return y
    return tape._record(
        "pad_zero", y,
        [(f, lambda g, lo=left, hi=left + k: g[lo:hi].copy())])
