"""3D analytical discrete ordinates for a pencil beam in an infinite medium."""

from ._ado3d import (
    ConfigError,
    InversionParams,
    MediumParams,
    NumericalError,
    SpectralModel,
    build_spectral_model,
    density_curve,
    exp_diff_C,
    f_kernel,
    gauss_legendre,
    run_mc,
    sample_hg,
)

__all__ = [
    "ConfigError",
    "InversionParams",
    "MediumParams",
    "NumericalError",
    "SpectralModel",
    "build_spectral_model",
    "density_curve",
    "exp_diff_C",
    "f_kernel",
    "gauss_legendre",
    "run_mc",
    "sample_hg",
]
