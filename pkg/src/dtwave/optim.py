"""Adam optimizer in functional form.

State is held in a small dataclass and every step returns fresh arrays, so
callers can keep checkpoints of any step without defensive copying.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass
class AdamState:
    """First/second moment accumulators and the step counter."""

    m: np.ndarray
    v: np.ndarray
    t: int = 0


def adam_init(shape) -> AdamState:
    return AdamState(m=np.zeros(shape), v=np.zeros(shape), t=0)


def adam_step(param, grad, state, learning_rate=1e-3, beta1=0.9,
              beta2=0.999, eps=1e-8):
    """One bias-corrected Adam update.

    Returns (new_param, new_state); inputs are left untouched. A zero
    gradient applied to a fresh state leaves the parameter unchanged.
    """
    if not 0.0 <= beta1 < 1.0 or not 0.0 <= beta2 < 1.0:
        raise InvalidArgumentError("beta1 and beta2 must lie in [0, 1)")
    param = np.asarray(param, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if param.shape != grad.shape:
        raise InvalidArgumentError(
            "parameter shape %r does not match gradient shape %r"
            % (param.shape, grad.shape))
    t = state.t + 1
    m = beta1 * state.m + (1.0 - beta1) * grad
    v = beta2 * state.v + (1.0 - beta2) * grad * grad
    m_hat = m / (1.0 - beta1 ** t)
    v_hat = v / (1.0 - beta2 ** t)
    new_param = param - learning_rate * m_hat / (np.sqrt(v_hat) + eps)
    return new_param, AdamState(m=m, v=v, t=t)
