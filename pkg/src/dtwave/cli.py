"""Command-line surface.

Subcommands cover the forward/inverse transforms, filter learning,
synthetic data generation, impulse-response emission, the diagnostics, and
filter comparison. Exit codes: 0 success, 1 usage error, 2 validation or
numeric failure.
"""

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import containers, diagnostics, pgm
from .dualtree import (DualTreePyramid1D, DualTreePyramidComplex2D,
                       DualTreePyramidReal2D, dtcwt1d_forward,
                       dtcwt1d_inverse, dtcwt2d_complex_forward,
                       dtcwt2d_complex_inverse, dtcwt2d_real_forward,
                       dtcwt2d_real_inverse)
from .dwt1d import Pyramid1D, dwt1d_forward, dwt1d_inverse
from .dwt2d import Pyramid2D, dwt2d_forward, dwt2d_inverse
from .errors import DtwaveError, InvalidArgumentError
from .filters import DualTreeFilterSet, load_fixture, read_filter_file
from .losses import LossWeights, magnitude_response
from .metrics import compare_filters
from .synth import SynthConfig, gen_batch
from .train import TrainConfig, parse_config, train


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        raise SystemExit(1)


def _resolve_filter(name):
    """Filter taps from a file path or a bundled fixture name."""
    if os.path.exists(name):
        return read_filter_file(name)
    stem = name[:-4] if name.endswith(".flt") else name
    try:
        return load_fixture(stem)
    except OSError:
        raise InvalidArgumentError(
            "filter %r is neither a file nor a fixture name" % (name,))


def _filter_set(args):
    h1 = _resolve_filter(args.filter)
    h1_first = (_resolve_filter(args.filter_first)
                if args.filter_first else h1)
    return DualTreeFilterSet(h1=h1, h1_first=h1_first)


def _add_filter_flags(p):
    p.add_argument("--filter", required=True,
                   help="filter file path or fixture name")
    p.add_argument("--filter-first",
                   help="separate first-level filter (defaults to --filter)")


def _read_input(path):
    """(values, is_signal): 1-row CSVs load as 1D signals."""
    if str(path).lower().endswith((".pgm", ".pnm")):
        return pgm.read_pgm(path)[0], False
    values = pgm.read_csv_matrix(path)
    if values.shape[0] == 1:
        return values.ravel(), True
    return values, False


def _write_image(path, image):
    if str(path).lower().endswith(".pgm"):
        pgm.write_pgm(path, image)
    else:
        pgm.write_csv_matrix(path, image)


def _cmd_transform(args):
    data, is_signal = _read_input(args.input)
    fs = _filter_set(args)
    if args.variant == "dwt":
        forward = dwt1d_forward if is_signal else dwt2d_forward
        pyr = forward(data, fs.h1, args.levels)
    elif args.variant == "dual-real":
        forward = dtcwt1d_forward if is_signal else dtcwt2d_real_forward
        pyr = forward(data, fs, args.levels)
    else:
        if is_signal:
            pyr = dtcwt1d_forward(data, fs, args.levels)
        else:
            pyr = dtcwt2d_complex_forward(data, fs, args.levels)
    containers.write_pyramid_file(args.output, pyr)
    return 0


def _cmd_inverse(args):
    pyr = containers.read_pyramid_file(args.input)
    fs = _filter_set(args)
    if isinstance(pyr, Pyramid1D):
        out = dwt1d_inverse(pyr, fs.h1)
    elif isinstance(pyr, Pyramid2D):
        out = dwt2d_inverse(pyr, fs.h1)
    elif isinstance(pyr, DualTreePyramid1D):
        out = dtcwt1d_inverse(pyr, fs)
    elif isinstance(pyr, DualTreePyramidReal2D):
        out = dtcwt2d_real_inverse(pyr, fs)
    else:
        out = dtcwt2d_complex_inverse(pyr, fs)
    out = np.asarray(out)
    if out.ndim == 1:
        pgm.write_csv_matrix(args.output, out[None, :])
    else:
        _write_image(args.output, out)
    return 0


def _load_configs(args):
    sections = {}
    if args.config:
        with open(args.config) as fh:
            sections = parse_config(fh.read())
    return sections


def _cmd_train(args):
    sections = _load_configs(args)
    config = sections.get("train", TrainConfig())
    overrides = {}
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.variant is not None:
        overrides["variant"] = args.variant
    if overrides:
        config = dataclasses.replace(config, **overrides)
    weights = sections.get("loss", LossWeights.defaults(config.variant))
    synth = sections.get("synth", SynthConfig())
    dataset = gen_batch(args.count, synth)
    result = train(dataset, config, weights, out_dir=args.out_dir)
    final = result.history[-1]
    for name in ("total", "reconstruction", "sparsity", "constraint",
                 "gaussian"):
        print("%s=%s" % (name, repr(getattr(final, name))))
    return 0


def _cmd_gen_data(args):
    sections = _load_configs(args)
    synth = sections.get("synth", SynthConfig())
    os.makedirs(args.out_dir, exist_ok=True)
    rng = synth.rng()
    for index in range(args.count):
        image = (gen_batch(1, synth, rng))[0]
        if args.format == "pgm":
            path = os.path.join(args.out_dir, "img_%04d.pgm" % index)
            pgm.write_pgm(path, pgm.scale_to_gray(image))
        else:
            path = os.path.join(args.out_dir, "img_%04d.csv" % index)
            pgm.write_csv_matrix(path, image)
        print(path)
    return 0


def _cmd_impulse(args):
    fs = _filter_set(args)
    bands = range(1, 7) if args.band == 0 else [args.band]
    for band in bands:
        m = magnitude_response(fs, band, args.scale, args.variant)
        path = args.output
        if len(list(bands)) > 1:
            root, ext = os.path.splitext(path)
            path = "%s_band%d%s" % (root, band, ext or ".csv")
        if path.lower().endswith(".pgm"):
            pgm.write_pgm(path, pgm.scale_to_gray(m))
        else:
            pgm.write_csv_matrix(path, m)
        print(path)
    return 0


def _print_report(report):
    print("name=%s" % report.name)
    print("status=%s" % report.status)
    for key, value in report.metrics.items():
        print("%s=%s" % (key, repr(value)))
    for path in report.artifacts:
        print("artifact=%s" % path)
    return 0


def _cmd_diag_shift(args):
    fs = _filter_set(args)
    report = diagnostics.diag_shift_variance(
        fs, fs.h1, args.level, shift=args.shift, out_dir=args.out_dir)
    return _print_report(report)


def _cmd_diag_alias(args):
    fs = _filter_set(args)
    qlevels = None if args.qlevels == 0 else args.qlevels
    report = diagnostics.diag_aliasing(
        fs, fs.h1, levels=args.levels, qlevels=qlevels, out_dir=args.out_dir)
    return _print_report(report)


def _cmd_diag_band(args):
    fs = _filter_set(args)
    image = None
    if args.input:
        image, _ = _read_input(args.input)
    report = diagnostics.diag_band_reconstruction(
        fs, fs.h1, image=image, level=args.level, out_dir=args.out_dir)
    return _print_report(report)


def _cmd_compare(args):
    distance = compare_filters(_resolve_filter(args.filter),
                               _resolve_filter(args.ref))
    print(repr(distance))
    return 0


def _build_parser():
    parser = _Parser(prog="dtwave", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("transform", help="forward transform to a pyramid file")
    _add_filter_flags(p)
    p.add_argument("--variant", choices=("dwt", "dual-real", "dual-complex"),
                   default="dwt")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("inverse", help="invert a pyramid file")
    _add_filter_flags(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=_cmd_inverse)

    p = sub.add_parser("train", help="learn filters on synthetic data")
    p.add_argument("--config", help="flat section.key=value config file")
    p.add_argument("--count", type=int, default=128,
                   help="synthetic training images to generate")
    p.add_argument("--steps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--variant", choices=("real", "complex"))
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("gen-data", help="write synthetic images")
    p.add_argument("--config", help="config file with a synth section")
    p.add_argument("--count", type=int, default=16)
    p.add_argument("--format", choices=("csv", "pgm"), default="csv")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("impulse", help="band impulse magnitude images")
    _add_filter_flags(p)
    p.add_argument("--band", type=int, default=0,
                   help="band 1..6, or 0 for all six")
    p.add_argument("--scale", type=int, default=4)
    p.add_argument("--variant", choices=("real", "complex"),
                   default="complex")
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=_cmd_impulse)

    diag = sub.add_parser("diagnose", help="run a diagnostic")
    dsub = diag.add_subparsers(dest="diagnostic", required=True,
                               parser_class=_Parser)

    p = dsub.add_parser("shift", help="shift-variance comparison")
    _add_filter_flags(p)
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--shift", type=int, default=1)
    p.add_argument("--variant", choices=("real", "complex"),
                   default="complex")
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_diag_shift)

    p = dsub.add_parser("alias", help="quantization aliasing comparison")
    _add_filter_flags(p)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--qlevels", type=int, default=9,
                   help="quantization levels; 0 disables quantization")
    p.add_argument("--variant", choices=("real", "complex"),
                   default="complex")
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_diag_alias)

    p = dsub.add_parser("band-recon", help="single-level edge reconstruction")
    _add_filter_flags(p)
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--in", dest="input",
                   help="optional custom image instead of the analytic pair")
    p.add_argument("--variant", choices=("real", "complex"),
                   default="complex")
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_diag_band)

    p = sub.add_parser("compare-filters", help="shifted-cosine distance")
    p.add_argument("--filter", required=True)
    p.add_argument("--ref", required=True)
    p.set_defaults(func=_cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DtwaveError, OSError) as exc:
        sys.stderr.write("dtwave: %s\n" % exc)
        return 2


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
