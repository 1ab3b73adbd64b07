"""Dual-tree wavelet transforms with learnable filters.

Decimated 1D/2D wavelet transforms, their dual-tree real and complex
extensions, a small reverse-mode autodiff tape for learning the filters
with a sparse-autoencoder objective, and diagnostics quantifying shift
variance, aliasing, and band orientation.
"""

from .autodiff import Tape, Var, value_of
from .containers import read_pyramid_file, write_pyramid_file
from .diagnostics import (DiagnosticReport, diag_aliasing,
                          diag_band_reconstruction, diag_shift_variance,
                          make_disk_image, make_triangle_image,
                          step_edge_signal)
from .dualtree import (ComplexBands2D, DualTreePyramid1D,
                       DualTreePyramidComplex2D, DualTreePyramidReal2D,
                       butterfly, dtcwt1d_forward, dtcwt1d_inverse,
                       dtcwt2d_complex_forward, dtcwt2d_complex_inverse,
                       dtcwt2d_real_forward, dtcwt2d_real_inverse)
from .dwt1d import Pyramid1D, dwt1d_forward, dwt1d_inverse, undecimated_detail
from .dwt2d import (Bands2D, Pyramid2D, dwt2d_forward, dwt2d_inverse,
                    reconstruct_approx, reconstruct_single_level,
                    tile_coefficients, untile_coefficients)
from .errors import (DegenerateInputError, DtwaveError, InvalidArgumentError,
                     InvalidLengthError, NumericError, StructureError,
                     UnsupportedSizeError)
from .filters import (DualTreeFilterSet, as_filter, derive_first_level_partner,
                      derive_qshift_partner, derive_wavelet_filter,
                      fixtures_dir, haar, load_fixture, load_fixture_set,
                      read_filter_file, write_filter_file)
from .losses import (GaussianTarget, LossReport, LossWeights,
                     impulse_response, loss_gaussian_impulse,
                     loss_wavelet_constraint, magnitude_response, total_loss)
from .metrics import compare_filters, orientation_purity
from .multirate import (circular_convolve_decimate, quantize_uniform,
                        upsample_convolve_accumulate)
from .optim import AdamState, adam_init, adam_step
from .synth import SynthConfig, gen_batch, gen_image, gen_signal
from .train import (TrainConfig, TrainResult, config_hash, init_filters,
                    parse_config, serialize_config, train)

__all__ = [
    "AdamState", "Bands2D", "ComplexBands2D", "DegenerateInputError",
    "DiagnosticReport", "DtwaveError", "DualTreeFilterSet",
    "DualTreePyramid1D", "DualTreePyramidComplex2D", "DualTreePyramidReal2D",
    "GaussianTarget", "InvalidArgumentError", "InvalidLengthError",
    "LossReport", "LossWeights", "NumericError", "Pyramid1D", "Pyramid2D",
    "StructureError", "SynthConfig", "Tape", "TrainConfig", "TrainResult",
    "UnsupportedSizeError", "Var", "adam_init", "adam_step", "as_filter",
    "butterfly", "circular_convolve_decimate", "compare_filters",
    "config_hash", "derive_first_level_partner", "derive_qshift_partner",
    "derive_wavelet_filter", "diag_aliasing", "diag_band_reconstruction",
    "diag_shift_variance", "dtcwt1d_forward", "dtcwt1d_inverse",
    "dtcwt2d_complex_forward", "dtcwt2d_complex_inverse",
    "dtcwt2d_real_forward", "dtcwt2d_real_inverse", "dwt1d_forward",
    "dwt1d_inverse", "dwt2d_forward", "dwt2d_inverse", "fixtures_dir",
    "gen_batch", "gen_image", "gen_signal", "haar", "impulse_response",
    "init_filters", "load_fixture", "load_fixture_set",
    "loss_gaussian_impulse", "loss_wavelet_constraint", "magnitude_response",
    "make_disk_image", "make_triangle_image", "orientation_purity",
    "parse_config", "quantize_uniform", "read_filter_file",
    "read_pyramid_file", "reconstruct_approx", "reconstruct_single_level",
    "serialize_config", "step_edge_signal", "tile_coefficients",
    "total_loss", "train", "undecimated_detail", "untile_coefficients",
    "upsample_convolve_accumulate", "value_of", "write_filter_file",
    "write_pyramid_file",
]
