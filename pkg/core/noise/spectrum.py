"""Spectral analysis of Markov noise models: autocorrelation and power spectral density."""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm
from scipy.signal import periodogram as scipy_periodogram

from core.constants import ALGEBRA_TOLERANCE
from core.exceptions import NoiseModelError
from core.noise.model import NoiseModel
from core.validators import validate_positive

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Gamma = V diag(eigenvalues) V^T with weights chi = V^T b / sqrt(M)."""

    eigenvalues: np.ndarray
    chi: np.ndarray
    V: np.ndarray

    @property
    def decay_rates(self) -> np.ndarray:
        """Switching rates -lambda_k / 2 of the equivalent telegraph terms."""
        return -0.5 * self.eigenvalues

    def autocorrelation(self, t: ArrayLike) -> Union[float, np.ndarray]:
        """Eigen-form C(t) = sum_k chi_k^2 exp(lambda_k |t|)."""
        t_abs = np.abs(np.asarray(t, dtype=float))
        values = np.exp(np.multiply.outer(t_abs, self.eigenvalues)) @ (self.chi ** 2)
        return float(values) if values.ndim == 0 else values


def spectral_decomposition(model: NoiseModel) -> SpectralDecomposition:
    """
    Diagonalize the symmetric generator with eigenvalues in descending order.

    The zero eigenvalue (stationary mode) comes first.
    """
    eigenvalues, V = np.linalg.eigh(model.gamma)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    V = V[:, order]
    # eigh may return +-1e-15 for the stationary mode
    eigenvalues = np.minimum(eigenvalues, 0.0)
    chi = V.T @ model.b / math.sqrt(model.M)
    for array in (eigenvalues, chi, V):
        array.setflags(write=False)
    return SpectralDecomposition(eigenvalues=eigenvalues, chi=chi, V=V)


def autocorrelation(model: NoiseModel, t: float) -> float:
    """C(t) = (1/M) b^T exp(Gamma |t|) b, evaluated with a matrix exponential."""
    propagator = expm(model.gamma * abs(float(t)))
    return float(model.b @ propagator @ model.b) / model.M


def _stationary_mask(eigenvalues: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(eigenvalues)))) if eigenvalues.size else 1.0
    return np.abs(eigenvalues) <= ALGEBRA_TOLERANCE * scale


def psd(model: NoiseModel, f: ArrayLike) -> Union[float, np.ndarray]:
    """
    Two-sided power spectral density S(f) as a Lorentzian sum.

    S(f) = sum_{lambda_k < 0} chi_k^2 (-2 lambda_k) / (lambda_k^2 + (2 pi f)^2)

    Raises:
        NoiseModelError: If a zero eigenvalue carries weight (a DC component)
    """
    decomposition = spectral_decomposition(model)
    stationary = _stationary_mask(decomposition.eigenvalues)
    chi_scale = max(1.0, float(np.max(np.abs(decomposition.chi)))) if model.M else 1.0
    dc_weight = np.abs(decomposition.chi[stationary])
    if dc_weight.size and float(np.max(dc_weight)) > 1e-9 * chi_scale:
        raise NoiseModelError(
            f"Model is biased: stationary mode carries weight {float(np.max(dc_weight)):.3e}"
        )

    lam = decomposition.eigenvalues[~stationary]
    weights = decomposition.chi[~stationary] ** 2
    omega = 2.0 * math.pi * np.asarray(f, dtype=float)
    values = (weights * (-2.0 * lam)) / (lam ** 2 + np.multiply.outer(omega ** 2, np.ones_like(lam)))
    result = values.sum(axis=-1)
    return float(result) if result.ndim == 0 else result


def ideal_psd(A: float, alpha: float, f: ArrayLike) -> Union[float, np.ndarray]:
    """Reference 1/f^alpha curve A / f^alpha for positive frequencies."""
    f_arr = np.asarray(f, dtype=float)
    if np.any(f_arr <= 0):
        raise NoiseModelError("ideal_psd is defined only for f > 0")
    result = A / f_arr ** alpha
    return float(result) if result.ndim == 0 else result


def arctan_psd(A: float, gamma_min: float, gamma_max: float, f: ArrayLike) -> Union[float, np.ndarray]:
    """
    Continuum RTN integral for Delta^2 g = 2A/gamma over [gamma_min, gamma_max].

    S(f) = 2A/(pi f) [arctan(gamma_max/(pi f)) - arctan(gamma_min/(pi f))]
    """
    x = math.pi * np.asarray(f, dtype=float)
    if np.any(x <= 0):
        raise NoiseModelError("arctan_psd is defined only for f > 0")
    result = 2.0 * A / x * (np.arctan(gamma_max / x) - np.arctan(gamma_min / x))
    return float(result) if result.ndim == 0 else result


def rtn_sum_autocorrelation(deltas: Sequence[float], rates: Sequence[float], t: ArrayLike):
    """C(t) = sum_k Delta_k^2 exp(-2 gamma_k |t|)."""
    deltas = np.asarray(deltas, dtype=float)
    rates = np.asarray(rates, dtype=float)
    t_abs = np.abs(np.asarray(t, dtype=float))
    result = np.exp(-2.0 * np.multiply.outer(t_abs, rates)) @ deltas ** 2
    return float(result) if result.ndim == 0 else result


def rtn_sum_psd(deltas: Sequence[float], rates: Sequence[float], f: ArrayLike):
    """S(f) = sum_k Delta_k^2 gamma_k / (gamma_k^2 + (pi f)^2)."""
    deltas = np.asarray(deltas, dtype=float)
    rates = np.asarray(rates, dtype=float)
    x2 = (math.pi * np.asarray(f, dtype=float)) ** 2
    result = (deltas ** 2 * rates / (rates ** 2 + np.multiply.outer(x2, np.ones_like(rates)))).sum(axis=-1)
    return float(result) if result.ndim == 0 else result


def matched_rtn_sum(model: NoiseModel) -> Tuple[np.ndarray, np.ndarray]:
    """
    Telegraph-ensemble parameters with the same autocorrelation as the model.

    Returns:
        Tuple of (deltas, rates) with Delta_k = |chi_k| and gamma_k = -lambda_k / 2
        over the non-stationary modes
    """
    decomposition = spectral_decomposition(model)
    active = ~_stationary_mask(decomposition.eigenvalues)
    return np.abs(decomposition.chi[active]), decomposition.decay_rates[active]


def log_log_slope(f: ArrayLike, values: ArrayLike) -> float:
    """Least-squares slope of log(values) against log(f)."""
    slope, _ = np.polyfit(np.log(np.asarray(f, dtype=float)), np.log(np.asarray(values, dtype=float)), 1)
    return float(slope)


def periodogram(samples: np.ndarray, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two-sided periodogram averaged over sample paths.

    Args:
        samples: Array of shape (n_paths, n_samples) of eta on a uniform grid
        dt: Sampling interval

    Returns:
        Tuple of (f, S) restricted to 0 < f < Nyquist, normalized like psd()
    """
    validate_positive("dt", dt)
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    f, one_sided = scipy_periodogram(
        samples, fs=1.0 / dt, detrend="constant", return_onesided=True, scaling="density", axis=-1
    )
    averaged = one_sided.mean(axis=0)
    # Interior one-sided bins carry both +f and -f; halve to get the two-sided density
    return f[1:-1], 0.5 * averaged[1:-1]
