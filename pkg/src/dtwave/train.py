"""Filter learning loop: taped loss, reverse-mode gradients, Adam updates.

Also home to the flat ``section.key=value`` config text format shared by
the trainer and the CLI. Floats are serialized with repr(), so a
serialize/parse round trip reproduces every value bit for bit.
"""

import dataclasses
import hashlib
import os
from dataclasses import dataclass

import numpy as np

from .autodiff import Tape
from .errors import (InvalidArgumentError, InvalidLengthError, NumericError,
                     StructureError)
from .filters import ROOT2, DualTreeFilterSet, write_filter_file
from .losses import (GaussianTarget, LossReport, LossWeights, _check_variant,
                     total_loss)
from .optim import adam_init, adam_step
from .synth import SynthConfig

HISTORY_HEADER = "step," + ",".join(LossReport.COLUMNS)


@dataclass
class TrainConfig:
    """Settings of one training run."""

    steps: int = 1000
    batch_size: int = 16
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    variant: str = "complex"
    filter_len: int = 10
    filter_len_first: int = 10
    impulse_scale: int = 4
    levels: int = 4

    def __post_init__(self):
        if self.steps < 1:
            raise InvalidArgumentError("steps must be >= 1")
        if self.batch_size < 1:
            raise InvalidArgumentError("batch_size must be >= 1")
        _check_variant(self.variant)
        for name in ("filter_len", "filter_len_first"):
            k = getattr(self, name)
            if k < 2 or k % 2 != 0:
                raise InvalidLengthError(
                    "%s must be even and >= 2, got %r" % (name, k))
        if self.impulse_scale < 1:
            raise InvalidArgumentError("impulse_scale must be >= 1")
        if self.levels < 1:
            raise InvalidArgumentError("levels must be >= 1")


# --- config text format ----------------------------------------------------

_SECTIONS = {"train": TrainConfig, "loss": LossWeights, "synth": SynthConfig}


def _format_value(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def serialize_config(train=None, loss=None, synth=None) -> str:
    """Flat ``section.key=value`` text for any subset of the three configs."""
    objs = {"train": train, "loss": loss, "synth": synth}
    lines = []
    for section in _SECTIONS:
        obj = objs[section]
        if obj is None:
            continue
        for f in dataclasses.fields(obj):
            lines.append("%s.%s=%s"
                         % (section, f.name, _format_value(getattr(obj, f.name))))
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> dict:
    """Inverse of serialize_config: {'train': TrainConfig, ...} for the
    sections present in the text."""
    raw = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line or "." not in line.split("=", 1)[0]:
            raise StructureError("config line %d not section.key=value: %r"
                                 % (ln, line))
        key, value = line.split("=", 1)
        section, name = key.strip().split(".", 1)
        if section not in _SECTIONS:
            raise StructureError("unknown config section %r on line %d"
                                 % (section, ln))
        raw.setdefault(section, {})[name.strip()] = value.strip()
    out = {}
    for section, kwargs in raw.items():
        cls = _SECTIONS[section]
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        converted = {}
        for name, value in kwargs.items():
            if name not in types:
                raise StructureError("unknown field %s.%s" % (section, name))
            t = types[name]
            t = {"int": int, "float": float, "str": str}.get(t, t)
            converted[name] = t(value)
        out[section] = cls(**converted)
    return out


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# --- initialization and the loop -------------------------------------------

def init_filter(k, rng, noise=1e-2):
    """Near-Haar start: centered [1/sqrt(2), 1/sqrt(2)] taps plus small
    uniform noise, then one projection to unit norm."""
    h = np.zeros(k)
    h[k // 2 - 1] = h[k // 2] = 1.0 / ROOT2
    h = h + rng.uniform(-noise, noise, k)
    return h / np.linalg.norm(h)


def init_filters(config, rng):
    h1 = init_filter(config.filter_len, rng)
    h1_first = init_filter(config.filter_len_first, rng)
    return h1, h1_first


@dataclass
class TrainResult:
    filters: DualTreeFilterSet
    history: list
    config: TrainConfig
    weights: LossWeights


class _Checkpointer:
    """Writes filter files, the metadata sidecar, and the history CSV."""

    def __init__(self, out_dir, config, weights):
        self.dir = out_dir
        os.makedirs(out_dir, exist_ok=True)
        text = serialize_config(train=config, loss=weights)
        with open(os.path.join(out_dir, "config.txt"), "w") as fh:
            fh.write(text)
        self.hash = config_hash(text)
        self.seed = config.seed
        self._history = open(os.path.join(out_dir, "history.csv"), "w")
        self._history.write(HISTORY_HEADER + "\n")

    def log(self, step, report):
        row = ",".join(repr(float(v)) for v in report.as_row())
        self._history.write("%d,%s\n" % (step, row))
        self._history.flush()

    def save(self, step, h1, h1_first, report):
        write_filter_file(os.path.join(self.dir, "h1.flt"), h1)
        write_filter_file(os.path.join(self.dir, "h1_first.flt"), h1_first)
        lines = ["step=%d" % step]
        for name, value in zip(LossReport.COLUMNS, report.as_row()):
            lines.append("%s=%s" % (name, repr(float(value))))
        lines.append("config_hash=%s" % self.hash)
        lines.append("seed=%d" % self.seed)
        with open(os.path.join(self.dir, "checkpoint.txt"), "w") as fh:
            fh.write("\n".join(lines) + "\n")

    def close(self):
        self._history.close()


def train(dataset, config, weights=None, out_dir=None):
    """Learn (h1, h1_first) on a dataset of images.

    Parameters
    ----------
    dataset : ndarray, shape (N, H, W)
        Training images; H and W divisible by 2**levels.
    config : TrainConfig
    weights : LossWeights, optional
        Defaults to the published settings for the config's variant.
    out_dir : str, optional
        When given, writes config.txt, a per-step history.csv, and a
        checkpoint (h1.flt, h1_first.flt, checkpoint.txt) holding the
        final parameters, or the last finite ones after an abort.

    Returns
    -------
    TrainResult
        Learned filters and the per-step LossReport history.

    Raises
    ------
    NumericError
        On a non-finite loss or gradient; the last finite checkpoint is
        retained on disk before the abort.
    """
    dataset = np.asarray(dataset, dtype=np.float64)
    if dataset.ndim != 3 or dataset.shape[0] < 1:
        raise InvalidArgumentError(
            "expected a nonempty (N, H, W) dataset, got shape %r"
            % (dataset.shape,))
    if weights is None:
        weights = LossWeights.defaults(config.variant)
    n, height, width = dataset.shape
    div = 1 << config.levels
    if height % div or width % div:
        raise InvalidLengthError(
            "image shape (%d, %d) not divisible by 2**%d"
            % (height, width, config.levels))

    size = min(config.filter_len << config.impulse_scale, height, width)
    if size % (1 << config.impulse_scale):
        raise InvalidLengthError(
            "impulse image size %d not divisible by 2**%d"
            % (size, config.impulse_scale))
    target = GaussianTarget(size=size)

    rng = np.random.default_rng(config.seed)
    h1, h1_first = init_filters(config, rng)

    state1 = adam_init(h1.shape)
    state_first = adam_init(h1_first.shape)
    ckpt = _Checkpointer(out_dir, config, weights) if out_dir else None
    history = []
    last_finite = None

    try:
        for step in range(1, config.steps + 1):
            idx = rng.integers(0, n, config.batch_size)
            batch = dataset[idx]

            tape = Tape()
            v1 = tape.variable(h1, op="h1")
            v_first = tape.variable(h1_first, op="h1_first")
            fs = DualTreeFilterSet(v1, v_first)
            report = total_loss(batch, fs, weights, target,
                                variant=config.variant, levels=config.levels,
                                impulse_scale=config.impulse_scale)
            if not np.isfinite(report.total):
                raise NumericError(
                    "non-finite loss %r at step %d" % (report.total, step))
            g1, g_first = tape.gradient(report.var, [v1, v_first],
                                        check_finite=True)

            # drop the taped node so old computation graphs can be freed
            report = dataclasses.replace(report, var=None)
            history.append(report)
            if ckpt:
                ckpt.log(step, report)
            last_finite = (step, h1, h1_first, report)

            h1, state1 = adam_step(h1, g1, state1,
                                   learning_rate=config.learning_rate,
                                   beta1=config.beta1, beta2=config.beta2,
                                   eps=config.eps)
            h1_first, state_first = adam_step(
                h1_first, g_first, state_first,
                learning_rate=config.learning_rate,
                beta1=config.beta1, beta2=config.beta2, eps=config.eps)
    except NumericError:
        # leave the newest parameters with a finite loss on disk
        if ckpt and last_finite is not None:
            ckpt.save(*last_finite)
        raise
    finally:
        if ckpt:
            ckpt.close()

    if ckpt:
        ckpt.save(config.steps, h1, h1_first, history[-1])
    return TrainResult(
        filters=DualTreeFilterSet(h1, h1_first),
        history=history, config=config, weights=weights)
