"""Constructors for RTN ensembles and the multi-state Markovian fluctuator."""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from core.config import get_config
from core.constants import DEFAULT_LEVEL_EXPONENT, DEFAULT_RATE_SPAN, DEFAULT_STRENGTH
from core.exceptions import NoiseModelError
from core.noise.generators import hadamard_generator, kronecker_sum_generator, sign_enumeration
from core.noise.model import Construction, NoiseModel
from core.validators import validate_positive

logger = logging.getLogger(__name__)


def build_multistate_fluctuator(m: int, gamma_min: float, delta: float, alpha: float) -> NoiseModel:
    """
    Build a single 2^m-state fluctuator approximating 1/f^alpha noise.

    Rates are gamma_k = gamma_min + (k-1) delta for k = 1..M-1, the eigenvalues
    of Gamma are -2 * {0, gamma_1, ..., gamma_{M-1}}, V is the Hadamard basis,
    chi_0 = 0 and chi_k = gamma_k^(-alpha/2). Amplitudes are b = sqrt(M) V chi.

    Args:
        m: Level exponent (M = 2^m), at least 2
        gamma_min: Smallest switching rate
        delta: Rate spacing, 0 < delta <= gamma_min
        alpha: Spectral exponent in (0, 2)

    Returns:
        Validated NoiseModel

    Raises:
        NoiseModelError: On invalid parameters or a generator violating the invariants
    """
    if int(m) != m or m < 2:
        raise NoiseModelError(f"m must be an integer >= 2, got {m}")
    validate_positive("gamma_min", gamma_min)
    validate_positive("delta", delta)
    if delta > gamma_min:
        raise NoiseModelError(f"delta ({delta}) must not exceed gamma_min ({gamma_min})")
    if not 0.0 < alpha < 2.0:
        raise NoiseModelError(f"alpha must lie in (0, 2), got {alpha}")

    size = 2 ** int(m)
    rates = gamma_min + delta * np.arange(size - 1)
    gamma, V, _ = hadamard_generator(rates)
    chi = np.concatenate(([0.0], rates ** (-alpha / 2.0)))
    b = math.sqrt(size) * (V @ chi)

    model = NoiseModel(
        gamma=gamma,
        b=b,
        alpha=alpha,
        gamma_grid=tuple(rates),
        # Delta^2 g = 2 A gamma^-alpha with g = 1/delta on the uniform grid
        A=1.0 / (2.0 * delta),
        construction=Construction.HADAMARD,
    )
    logger.debug(
        f"Built {size}-state fluctuator: rates [{rates[0]:.4g}, {rates[-1]:.4g}], alpha={alpha}"
    )
    return model


def build_rtn_ensemble(
    deltas: Sequence[float],
    taus: Sequence[float],
    alpha: Optional[float] = None,
    A: float = 1.0,
    max_fluctuators: Optional[int] = None,
) -> NoiseModel:
    """
    Build the product-state model of K independent symmetric telegraph sources.

    Source k switches between +Delta_k and -Delta_k at rate gamma_k = 1/tau_k.

    Args:
        deltas: Amplitudes Delta_k
        taus: Correlation times tau_k
        alpha: Optional spectral exponent the ensemble approximates
        A: Spectral prefactor recorded on the model
        max_fluctuators: Cap on K (defaults to the configured rtn_state_cap)

    Raises:
        NoiseModelError: On mismatched or nonpositive inputs, or K above the cap
    """
    deltas = [float(d) for d in deltas]
    taus = [float(t) for t in taus]
    if not deltas or len(deltas) != len(taus):
        raise NoiseModelError(
            f"Need K >= 1 matching amplitudes and times, got {len(deltas)} and {len(taus)}"
        )
    cap = max_fluctuators if max_fluctuators is not None else get_config().numerics.rtn_state_cap
    if len(deltas) > cap:
        raise NoiseModelError(
            f"K={len(deltas)} fluctuators exceeds the cap of {cap} (state space grows as 2^K)"
        )
    for delta, tau in zip(deltas, taus):
        validate_positive("RTN amplitude", delta)
        validate_positive("RTN correlation time", tau)

    rates = [1.0 / tau for tau in taus]
    return NoiseModel(
        gamma=kronecker_sum_generator(rates),
        b=sign_enumeration(deltas),
        alpha=alpha,
        gamma_grid=tuple(rates),
        A=A,
        construction=Construction.RTN_ENSEMBLE,
    )


def noise_free_model() -> NoiseModel:
    """Single-state model with zero amplitude (no noise)."""
    return NoiseModel(gamma=np.zeros((1, 1)), b=np.zeros(1))


def scale_to_strength(model: NoiseModel, target: float) -> NoiseModel:
    """
    Rescale amplitudes so that the average strength (1/M) sum |b_k| equals target.

    Gamma is unchanged; the PSD and the prefactor A scale by the square of the
    applied factor.

    Raises:
        NoiseModelError: If the model has no nonzero amplitude or target is invalid
    """
    validate_positive("target strength", target)
    current = model.mean_abs_amplitude
    if current == 0.0:
        raise NoiseModelError("Cannot scale a model whose amplitudes are all zero")
    factor = target / current
    return model.with_amplitudes(model.b * factor, A=model.A * factor ** 2)


def build_one_over_f_noise(
    tau_c: float,
    m: int = DEFAULT_LEVEL_EXPONENT,
    rate_span: float = DEFAULT_RATE_SPAN,
    alpha: float = 1.0,
    strength: Optional[float] = DEFAULT_STRENGTH,
) -> NoiseModel:
    """
    Sweep model: 2^m-state fluctuator with rates uniform on [1/tau_c, rate_span/tau_c].

    Args:
        tau_c: Characteristic correlation time
        m: Level exponent
        rate_span: gamma_max / gamma_min, at most M - 1 so that delta <= gamma_min
        alpha: Spectral exponent
        strength: Target <|eta|>; None keeps the unscaled amplitudes

    Raises:
        NoiseModelError: If rate_span cannot be realized with 2^m states
    """
    validate_positive("tau_c", tau_c)
    size = 2 ** int(m)
    if not 1.0 < rate_span <= size - 1:
        raise NoiseModelError(
            f"rate_span must lie in (1, {size - 1}] for {size} states, got {rate_span}"
        )
    gamma_min = 1.0 / tau_c
    delta = (rate_span - 1.0) * gamma_min / (size - 2)
    # Guard the inequality against round-off when rate_span == M - 1
    delta = min(delta, gamma_min)
    model = build_multistate_fluctuator(m, gamma_min, delta, alpha)
    if strength is None:
        return model
    return scale_to_strength(model, strength)
