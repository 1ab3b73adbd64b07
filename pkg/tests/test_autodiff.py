"""Reverse-mode tape: every op's gradient against central differences."""

import numpy as np
import pytest

from dtwave.autodiff import (Tape, add, alt_sign, conv_decim, mean_, mul,
                             pad_zero, reverse, roll, sqrt_, sub, sum_,
                             sum_abs, upsample_conv, value_of)
from dtwave.errors import InvalidArgumentError, NumericError

EPS = 1e-6


def fd_gradient(fn, x):
    """Central differences of a scalar-valued fn at x, coordinatewise."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    flat = x.ravel()
    gf = g.ravel()
    for i in range(flat.shape[0]):
        xp = flat.copy(); xp[i] += EPS
        xm = flat.copy(); xm[i] -= EPS
        gf[i] = (fn(xp.reshape(x.shape)) - fn(xm.reshape(x.shape))) / (2 * EPS)
    return g


def check_op(build, x0, tol=1e-7):
    """build(tape, var) -> scalar Var; compares tape gradient with FD."""
    tape = Tape()
    v = tape.variable(x0)
    out = build(tape, v)
    (got,) = tape.gradient(out, [v])

    def scalar(x):
        t = Tape()
        return float(value_of(build(t, t.variable(x))))

    want = fd_gradient(scalar, x0)
    np.testing.assert_allclose(got, want, atol=tol)


def test_add_sub_mul_chain(rng):
    x0 = rng.standard_normal(6)
    c = rng.standard_normal(6)
    check_op(lambda t, v: sum_(mul(add(v, c), sub(v, c))), x0)


def test_sqrt_gradient(rng):
    x0 = rng.uniform(0.5, 2.0, 5)
    check_op(lambda t, v: sum_(sqrt_(v)), x0)


def test_sum_abs_gradient_away_from_zero(rng):
    x0 = rng.uniform(0.5, 2.0, 6) * np.sign(rng.standard_normal(6))
    check_op(lambda t, v: sum_abs(v), x0)


def test_mean_gradient(rng):
    x0 = rng.standard_normal((3, 4))
    check_op(lambda t, v: mean_(v), x0)


def test_structural_ops_gradient(rng):
    x0 = rng.standard_normal(6)
    w = rng.standard_normal(6)
    check_op(lambda t, v: sum_(mul(reverse(v), w)), x0)
    check_op(lambda t, v: sum_(mul(alt_sign(v), w)), x0)
    check_op(lambda t, v: sum_(mul(roll(v, 2), w)), x0)
    w8 = rng.standard_normal(8)
    check_op(lambda t, v: sum_(mul(pad_zero(v, 1, 1), w8)), x0)


def test_conv_decim_gradient_wrt_signal_and_filter(rng):
    x0 = rng.standard_normal(12)
    f0 = rng.standard_normal(4)
    w = rng.standard_normal(6)
    check_op(lambda t, v: sum_(mul(conv_decim(v, f0), w)), x0)
    check_op(lambda t, v: sum_(mul(conv_decim(x0, v), w)), f0)


def test_upsample_conv_gradient_wrt_both(rng):
    c0 = rng.standard_normal(6)
    f0 = rng.standard_normal(4)
    w = rng.standard_normal(12)
    check_op(lambda t, v: sum_(mul(upsample_conv(v, f0), w)), c0)
    check_op(lambda t, v: sum_(mul(upsample_conv(c0, v), w)), f0)


def test_conv_gradient_filter_longer_than_signal(rng):
    # deep pyramid levels shrink bands below the filter length; the
    # periodized kernels must still differentiate cleanly
    x0 = rng.standard_normal(4)
    f0 = rng.standard_normal(10)
    w = rng.standard_normal(2)
    check_op(lambda t, v: sum_(mul(conv_decim(v, f0), w)), x0)
    check_op(lambda t, v: sum_(mul(conv_decim(x0, v), w)), f0)


def test_gradient_accumulates_over_reuse(rng):
    x0 = rng.standard_normal(5)
    check_op(lambda t, v: sum_(mul(v, v)), x0)


def test_batched_conv_gradient(rng):
    x0 = rng.standard_normal((3, 8))
    f0 = rng.standard_normal(4)
    w = rng.standard_normal((3, 4))
    check_op(lambda t, v: sum_(mul(conv_decim(v, f0), w)), x0)
    check_op(lambda t, v: sum_(mul(conv_decim(x0, v), w)), f0)


def test_gradient_requires_scalar_output(rng):
    tape = Tape()
    v = tape.variable(rng.standard_normal(4))
    out = mul(v, v)
    with pytest.raises(InvalidArgumentError):
        tape.gradient(out, [v])


def test_cross_tape_operands_rejected(rng):
    t1, t2 = Tape(), Tape()
    a = t1.variable(rng.standard_normal(3))
    b = t2.variable(rng.standard_normal(3))
    with pytest.raises(InvalidArgumentError):
        add(a, b)


def test_gradient_from_foreign_tape_rejected(rng):
    t1, t2 = Tape(), Tape()
    a = t1.variable(rng.standard_normal(3))
    out = sum_(a)
    b = t2.variable(rng.standard_normal(3))
    with pytest.raises(InvalidArgumentError):
        t1.gradient(out, [b])
    with pytest.raises(InvalidArgumentError):
        t2.gradient(out, [a])


def test_check_finite_names_offending_node():
    tape = Tape()
    v = tape.variable(np.array([0.0, 1.0]))
    out = sum_(sqrt_(v))  # d sqrt/dx at 0 is infinite
    with np.errstate(divide="ignore"):
        with pytest.raises(NumericError):
            tape.gradient(out, [v], check_finite=True)


def test_unused_leaf_gets_zero_gradient(rng):
    tape = Tape()
    v = tape.variable(rng.standard_normal(4))
    u = tape.variable(rng.standard_normal(4))
    out = sum_(v)
    gv, gu = tape.gradient(out, [v, u])
    np.testing.assert_allclose(gv, np.ones(4))
    np.testing.assert_allclose(gu, np.zeros(4))


def test_plain_arrays_pass_through_ops(rng):
    x = rng.standard_normal(8)
    f = rng.standard_normal(4)
    out = conv_decim(x, f)
    assert isinstance(out, np.ndarray)
    np.testing.assert_allclose(sum_(x), x.sum())
