"""Synthetic training data: oriented fields of octave-spaced sine waves.

A draw picks an orientation, switches each harmonic on or off with a fair
coin (redrawn until at least one is on), and gives each a uniform phase:

    x(t) = sum_k a_k * sin(2**k * t + phi_k),  a_k in {0, 1}

An image evaluates x along the oriented coordinate t = f0*(u*cos(theta) +
v*sin(theta)). The default base frequency gives the k=0 harmonic a period
of 64 pixels, so five octaves stay below Nyquist.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

TWO_PI = 2.0 * np.pi


@dataclass
class SynthConfig:
    """Generator settings; ``seed`` pins the whole dataset."""

    harmonics: int = 5
    size: int = 128
    base_freq: float = TWO_PI / 64.0
    seed: int = 0

    def __post_init__(self):
        if self.harmonics < 1:
            raise InvalidArgumentError(
                "harmonics must be >= 1, got %r" % (self.harmonics,))
        if self.size < 1:
            raise InvalidArgumentError(
                "size must be >= 1, got %r" % (self.size,))

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _draw_params(cfg, rng):
    # indicator per harmonic; an all-zero draw is rejected and redrawn
    a = rng.integers(0, 2, cfg.harmonics)
    while not a.any():
        a = rng.integers(0, 2, cfg.harmonics)
    phi = rng.uniform(0.0, TWO_PI, cfg.harmonics)
    return a.astype(np.float64), phi


def harmonic_sum(t, a, phi):
    """Evaluate sum_k a_k * sin(2**k * t + phi_k) on a sample grid."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    for k in range(len(a)):
        if a[k] != 0.0:
            out += a[k] * np.sin((1 << k) * t + phi[k])
    return out


def gen_signal(t, cfg, rng=None):
    """Random harmonic sum evaluated on the grid ``t``."""
    if rng is None:
        rng = cfg.rng()
    a, phi = _draw_params(cfg, rng)
    return harmonic_sum(t, a, phi)


def gen_image(cfg, rng=None):
    """One oriented sine-field image of shape (size, size)."""
    if rng is None:
        rng = cfg.rng()
    theta = rng.uniform(0.0, np.pi)
    a, phi = _draw_params(cfg, rng)
    u = np.arange(cfg.size, dtype=np.float64)[:, None]
    v = np.arange(cfg.size, dtype=np.float64)[None, :]
    t = cfg.base_freq * (u * np.cos(theta) + v * np.sin(theta))
    return harmonic_sum(t, a, phi)


def gen_batch(count, cfg, rng=None):
    """Stack of ``count`` images, shape (count, size, size)."""
    if count < 1:
        raise InvalidArgumentError("count must be >= 1, got %r" % (count,))
    if rng is None:
        rng = cfg.rng()
    return np.stack([gen_image(cfg, rng) for _ in range(count)])
