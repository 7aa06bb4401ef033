"""Pseudo-spectral solver and numerical-verification harness for the 2-D
electrified thin-film equation and its vertical-plane limit."""

from ._core import (
    BlowupError,
    ConfigError,
    Grid,
    HighFreqBound,
    IllposedConfig,
    Params,
    StepperConfig,
    __version__,
    apply_semigroup,
    bilinear_b,
    check_kernel_sup_bound,
    d2_flow_exact,
    et_norm,
    etd_step,
    evolve,
    high_freq_bound,
    indicator_data,
    inflation_norm,
    inflation_slope,
    kernel_difference_sup,
    kernel_hat,
    lebesgue2_norm,
    local_existence_time,
    make_perturbed_data,
    nonlinear_term,
    picard_solve,
    random_band_field,
    run_json,
    sobolev_norm,
    sweep,
    symbol_f,
    to_fourier,
    to_physical,
)

__all__ = [
    "BlowupError",
    "ConfigError",
    "Grid",
    "HighFreqBound",
    "IllposedConfig",
    "Params",
    "StepperConfig",
    "__version__",
    "apply_semigroup",
    "bilinear_b",
    "check_kernel_sup_bound",
    "d2_flow_exact",
    "et_norm",
    "etd_step",
    "evolve",
    "high_freq_bound",
    "indicator_data",
    "inflation_norm",
    "inflation_slope",
    "kernel_difference_sup",
    "kernel_hat",
    "lebesgue2_norm",
    "local_existence_time",
    "make_perturbed_data",
    "nonlinear_term",
    "picard_solve",
    "random_band_field",
    "run_json",
    "sobolev_norm",
    "sweep",
    "symbol_f",
    "to_fourier",
    "to_physical",
]
