"""Classical noise models: RTN ensembles and the multi-state Markovian fluctuator."""

from core.noise.builders import (
    build_multistate_fluctuator,
    build_one_over_f_noise,
    build_rtn_ensemble,
    noise_free_model,
    scale_to_strength,
)
from core.noise.model import Construction, NoiseModel
from core.noise.sampling import NoiseTrajectory, sample_paths_on_grid, sample_trajectory, sample_values
from core.noise.spectrum import (
    SpectralDecomposition,
    arctan_psd,
    autocorrelation,
    ideal_psd,
    log_log_slope,
    matched_rtn_sum,
    periodogram,
    psd,
    rtn_sum_autocorrelation,
    rtn_sum_psd,
    spectral_decomposition,
)

__all__ = [
    "Construction",
    "NoiseModel",
    "NoiseTrajectory",
    "SpectralDecomposition",
    "arctan_psd",
    "autocorrelation",
    "build_multistate_fluctuator",
    "build_one_over_f_noise",
    "build_rtn_ensemble",
    "ideal_psd",
    "log_log_slope",
    "matched_rtn_sum",
    "noise_free_model",
    "periodogram",
    "psd",
    "rtn_sum_autocorrelation",
    "rtn_sum_psd",
    "sample_paths_on_grid",
    "sample_trajectory",
    "sample_values",
    "scale_to_strength",
    "spectral_decomposition",
]
