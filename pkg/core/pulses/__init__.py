"""Piecewise-constant control sequences and the reference pulse library."""

from core.pulses.library import (
    constant_pulse,
    corpse_identity,
    corpse_not,
    cpmg_block,
    pi_pulse,
    repeat,
    short_corpse_not,
    two_pi_pulse,
    uniform_random_pulse,
    zero_pulse,
)
from core.pulses.sequence import PulseSequence, Segment, pulse_from_segments, uniform_pulse

__all__ = [
    "PulseSequence",
    "Segment",
    "constant_pulse",
    "corpse_identity",
    "corpse_not",
    "cpmg_block",
    "pi_pulse",
    "pulse_from_segments",
    "repeat",
    "short_corpse_not",
    "two_pi_pulse",
    "uniform_pulse",
    "uniform_random_pulse",
    "zero_pulse",
]
