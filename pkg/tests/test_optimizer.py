import math

import numpy as np
import pytest
from pydantic import ValidationError

from core.constants import DESK_LEVEL_EXPONENT, DESK_RATE_SPAN, Target
from core.exceptions import OptimizationError
from core.experiments.commands import memory_reference_pulses, not_reference_starts
from core.fidelity import memory_fidelity, not_fidelity
from core.noise import build_one_over_f_noise
from core.optimizer import (
    FidelityObjective,
    OptimizationResult,
    OptimizerConfig,
    Termination,
    ascend,
    default_segment_count,
    optimize,
    start_seed,
)
from core.pulses import zero_pulse

PI = math.pi


def desk_noise(tau_c: float, strength: float = 0.125):
    return build_one_over_f_noise(tau_c, m=DESK_LEVEL_EXPONENT, rate_span=DESK_RATE_SPAN, strength=strength)


def quick_config(**overrides) -> OptimizerConfig:
    settings = {"n_starts": 1, "max_iterations": 20, "seed": 5}
    settings.update(overrides)
    return OptimizerConfig(**settings)


def test_segment_count_follows_duration():
    assert default_segment_count(6 * PI, 4) == 24
    assert default_segment_count(7 * PI / 3, 6) == 14
    assert default_segment_count(0.01, 4) == 1
    assert OptimizerConfig(n_segments=5).segments_for(6 * PI) == 5


def test_config_validation():
    with pytest.raises(ValidationError):
        OptimizerConfig(min_step=1.0)
    with pytest.raises(ValidationError):
        OptimizerConfig(n_segments=0)
    with pytest.raises(ValidationError):
        OptimizerConfig(seed=-1)
    assert "n_workers" not in OptimizerConfig(n_workers=2).cache_fields()


def test_start_seeds_are_distinct_and_stable():
    seeds = [start_seed(7, i) for i in range(8)]
    assert len(set(seeds)) == 8
    assert seeds == [start_seed(7, i) for i in range(8)]


def test_noise_free_not_gate_is_reached(quiet_model):
    config = quick_config(n_segments=4, n_starts=2, max_iterations=200)
    result = optimize(quiet_model, Target.NOT, PI, config)

    assert result.fidelity >= 1.0 - 1e-6
    assert not_fidelity(quiet_model, result.pulse) >= 1.0 - 1e-6
    assert result.pulse.duration == pytest.approx(PI)
    assert len(result.start_fidelities) == 4


def test_random_start_ascends_monotonically(desk_model):
    objective = FidelityObjective(desk_model, Target.NOT, 2 * PI, 8)
    initial = np.random.default_rng(3).uniform(-1.0, 1.0, 8)
    amplitudes, fidelity, trace, iterations, termination = ascend(objective, initial, quick_config(max_iterations=40))

    assert np.all(np.diff(trace) >= 0.0)
    assert fidelity == trace[-1]
    assert fidelity > objective.value(initial)
    assert np.all(np.abs(amplitudes) <= 1.0)
    assert termination in (Termination.GRADIENT_TOLERANCE, Termination.MAX_ITERATIONS, Termination.STEP_UNDERFLOW)
    assert iterations <= 40


def test_optimization_is_deterministic(desk_model):
    config = quick_config(n_starts=3, n_workers=3)
    first = optimize(desk_model, Target.MEMORY, 2 * PI, config)
    second = optimize(desk_model, Target.MEMORY, 2 * PI, quick_config(n_starts=3, n_workers=1))

    np.testing.assert_array_equal(first.pulse.amplitudes, second.pulse.amplitudes)
    assert first.fidelity == second.fidelity
    assert first.start_index == second.start_index


def test_best_start_is_reported(desk_model):
    result = optimize(desk_model, Target.MEMORY, 2 * PI, quick_config(n_starts=2))

    assert result.fidelity == max(result.start_fidelities)
    assert result.start_index == result.start_fidelities.index(result.fidelity)
    assert result.fidelity >= result.initial_fidelity
    assert result.converged == (result.termination == Termination.GRADIENT_TOLERANCE)


def test_extra_starts_must_match_duration(desk_model):
    with pytest.raises(OptimizationError, match="lasts"):
        optimize(desk_model, Target.MEMORY, 2 * PI, quick_config(), extra_starts=[zero_pulse(PI)])


@pytest.mark.parametrize("tau_c", [3.0, 30.0, 100.0])
def test_optimized_memory_beats_references(tau_c):
    model = desk_noise(tau_c)
    T = 6 * PI
    references = memory_reference_pulses(T, padded=True)
    starts = [pulse for name, pulse in references.items() if name != "zero"]

    result = optimize(model, Target.MEMORY, T, quick_config(), extra_starts=starts)

    assert len(result.pulse) == 24
    optimized = memory_fidelity(model, result.pulse)
    for name, pulse in references.items():
        assert optimized >= memory_fidelity(model, pulse) - 1e-10, name


@pytest.mark.parametrize("tau_c", [3.0, 30.0, 100.0])
def test_optimized_not_beats_references(tau_c):
    model = desk_noise(tau_c)
    T = 7 * PI / 3
    starts = not_reference_starts(T)

    result = optimize(model, Target.NOT, T, quick_config(segments_per_pi=6), extra_starts=starts)

    assert len(result.pulse) == 14
    optimized = not_fidelity(model, result.pulse)
    for pulse in starts + [zero_pulse(T)]:
        assert optimized >= not_fidelity(model, pulse) - 1e-10, pulse.label


def test_result_document_round_trip(desk_model):
    result = optimize(desk_model, Target.NOT, PI, quick_config(n_segments=4))
    document = result.to_dict()
    restored = OptimizationResult.from_dict(document)

    assert set(document) >= {"config", "fidelity", "segments", "trace"}
    assert restored.pulse == result.pulse
    assert restored.fidelity == result.fidelity
    assert restored.fidelity_trace == result.fidelity_trace
    assert restored.config == result.config


@pytest.mark.slow
def test_memory_fidelity_peaks_at_even_multiples_of_pi():
    model = desk_noise(3.0)
    config = OptimizerConfig(seed=0)
    values = {k: optimize(model, Target.MEMORY, k * PI, config).fidelity for k in range(2, 8)}

    for even in (2, 4, 6):
        assert values[even] > values[even + 1]


@pytest.mark.slow
def test_strong_noise_leaves_nothing_to_optimize():
    model = desk_noise(30.0, strength=0.5)
    T = 6 * PI
    result = optimize(model, Target.MEMORY, T, OptimizerConfig(seed=0))

    zero = memory_fidelity(model, zero_pulse(T))
    assert zero - 1e-10 <= memory_fidelity(model, result.pulse) <= zero + 1e-4
