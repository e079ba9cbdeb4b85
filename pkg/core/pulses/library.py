"""Reference control sequences for quantum memory and the NOT gate."""

import math
from typing import Optional

import numpy as np

from core.constants import DEFAULT_A_MAX
from core.exceptions import PulseError
from core.pulses.sequence import PulseSequence, Segment, uniform_pulse

PI = math.pi


def _scaled(segments, a_max: float, label: str) -> PulseSequence:
    """Segments given as (sign, dimensionless duration) -> physical sequence."""
    return PulseSequence(
        tuple(Segment(sign * a_max, t_prime / a_max) for sign, t_prime in segments),
        a_max,
        label=label,
    )


def zero_pulse(T: float, a_max: float = DEFAULT_A_MAX) -> PulseSequence:
    """No control: a(t) = 0 on [0, T]."""
    if not math.isfinite(T) or T <= 0:
        raise PulseError(f"Duration must be positive, got {T}")
    return PulseSequence((Segment(0.0, float(T)),), a_max, label="zero")


def constant_pulse(amplitude: float, T: float, a_max: float = DEFAULT_A_MAX) -> PulseSequence:
    """Single segment of constant amplitude."""
    return uniform_pulse([amplitude], T, a_max, label="constant")


def two_pi_pulse(a_max: float = DEFAULT_A_MAX) -> PulseSequence:
    """Constant a_max for t' in [0, 2 pi]."""
    return _scaled([(1.0, 2 * PI)], a_max, "two_pi")


def corpse_identity(a_max: float = DEFAULT_A_MAX) -> PulseSequence:
    """Identity CORPSE: +a_max for pi, -a_max for 2 pi, +a_max for pi (total 4 pi)."""
    return _scaled([(1.0, PI), (-1.0, 2 * PI), (1.0, PI)], a_max, "corpse_identity")


def pi_pulse(a_max: float = DEFAULT_A_MAX) -> PulseSequence:
    """Constant a_max for t' in [0, pi]."""
    return _scaled([(1.0, PI)], a_max, "pi")


def corpse_not(a_max: float = DEFAULT_A_MAX) -> PulseSequence:
    """NOT-gate CORPSE with boundaries at t' = pi/3, 2 pi, 13 pi/3."""
    return _scaled([(1.0, PI / 3), (-1.0, 5 * PI / 3), (1.0, 7 * PI / 3)], a_max, "corpse_not")


def short_corpse_not(a_max: float = DEFAULT_A_MAX) -> PulseSequence:
    """NOT-gate short CORPSE with boundaries at t' = pi/3, 2 pi, 7 pi/3."""
    return _scaled([(-1.0, PI / 3), (1.0, 5 * PI / 3), (-1.0, PI / 3)], a_max, "short_corpse_not")


def cpmg_block(t_p: float, a_max: float = DEFAULT_A_MAX, alternate_signs: bool = False) -> PulseSequence:
    """
    One CPMG block: pi/2 | gap t_p | pi | gap t_p | pi/2 (total 2 pi + 2 t_p).

    With alternate_signs the refocusing pi pulse is applied with -a_max.
    """
    if not math.isfinite(t_p) or t_p <= 0:
        raise PulseError(f"CPMG interval must be positive, got {t_p}")
    middle = -1.0 if alternate_signs else 1.0
    return PulseSequence(
        (
            Segment(a_max, (PI / 2) / a_max),
            Segment(0.0, t_p),
            Segment(middle * a_max, PI / a_max),
            Segment(0.0, t_p),
            Segment(a_max, (PI / 2) / a_max),
        ),
        a_max,
        label=f"cpmg(t_p={t_p:g})",
    )


def repeat(seq: PulseSequence, n: int) -> PulseSequence:
    """Concatenate n copies of a sequence."""
    if int(n) != n or n < 1:
        raise PulseError(f"Repeat count must be a positive integer, got {n}")
    if n == 1:
        return seq
    return PulseSequence(seq.segments * int(n), seq.a_max, label=f"{seq.label}x{int(n)}")


def uniform_random_pulse(
    T: float,
    n_segments: int,
    seed: int,
    max_amp: Optional[float] = None,
    a_max: float = DEFAULT_A_MAX,
) -> PulseSequence:
    """
    Equal-duration segments with i.i.d. amplitudes uniform in [-max_amp, max_amp].

    Deterministic given the seed.
    """
    max_amp = a_max if max_amp is None else float(max_amp)
    if n_segments < 1:
        raise PulseError(f"n_segments must be >= 1, got {n_segments}")
    if not 0.0 <= max_amp <= a_max:
        raise PulseError(f"max_amp must lie in [0, a_max={a_max}], got {max_amp}")
    rng = np.random.default_rng(seed)
    amplitudes = rng.uniform(-max_amp, max_amp, size=int(n_segments)) if max_amp > 0 else np.zeros(n_segments)
    return uniform_pulse(amplitudes, T, a_max, label="random")
