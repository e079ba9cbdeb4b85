"""Multistart projected gradient ascent over piecewise-constant amplitudes."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.config import get_config
from core.exceptions import OptimizationError
from core.fidelity.metrics import TargetLike
from core.noise.model import NoiseModel
from core.optimizer.gradient import FidelityObjective
from core.optimizer.model import OptimizationResult, OptimizerConfig, Termination
from core.pulses.library import uniform_random_pulse
from core.pulses.sequence import PulseSequence, uniform_pulse
from core.validators import validate_positive

logger = logging.getLogger(__name__)


def start_seed(seed: int, index: int) -> int:
    """Seed of the index-th random start, derived from the run seed."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _projected_step(amplitudes: np.ndarray, gradient: np.ndarray, bound: float) -> np.ndarray:
    return np.clip(amplitudes + gradient, -bound, bound) - amplitudes


def ascend(
    objective: FidelityObjective,
    initial: np.ndarray,
    config: OptimizerConfig,
) -> Tuple[np.ndarray, float, List[float], int, str]:
    """
    Monotone projected ascent from one initial amplitude vector.

    A trial step clip(a + s g) is accepted only if Phi does not decrease; the
    step then doubles, otherwise it halves until it underflows.

    Returns:
        Tuple of (amplitudes, fidelity, fidelity_trace, iterations, termination)
    """
    bound = config.amplitude_bound
    amplitudes = np.clip(np.asarray(initial, dtype=float), -bound, bound)
    fidelity, gradient = objective.value_and_gradient(amplitudes)
    trace = [fidelity]
    step = config.initial_step

    for iteration in range(config.max_iterations):
        if np.linalg.norm(_projected_step(amplitudes, gradient, bound)) <= config.gradient_tolerance:
            return amplitudes, fidelity, trace, iteration, Termination.GRADIENT_TOLERANCE

        while True:
            candidate = np.clip(amplitudes + step * gradient, -bound, bound)
            if np.array_equal(candidate, amplitudes):
                return amplitudes, fidelity, trace, iteration, Termination.STEP_UNDERFLOW
            candidate_fidelity = objective.value(candidate)
            if candidate_fidelity >= fidelity:
                step *= 2.0
                break
            step *= 0.5
            if step < config.min_step:
                return amplitudes, fidelity, trace, iteration, Termination.STEP_UNDERFLOW

        amplitudes = candidate
        fidelity, gradient = objective.value_and_gradient(amplitudes)
        trace.append(fidelity)

    return amplitudes, fidelity, trace, config.max_iterations, Termination.MAX_ITERATIONS


def _initial_conditions(
    T: float, n_segments: int, config: OptimizerConfig, extra_starts: Sequence[PulseSequence]
) -> List[np.ndarray]:
    bound = config.amplitude_bound
    starts: List[np.ndarray] = []
    if config.include_reference_starts:
        starts.append(np.zeros(n_segments))
        starts.append(np.full(n_segments, bound))
    for index in range(config.n_starts):
        pulse = uniform_random_pulse(T, n_segments, start_seed(config.seed, index), max_amp=bound, a_max=bound)
        starts.append(pulse.amplitudes)
    for pulse in extra_starts:
        if abs(pulse.duration - T) > 1e-9 * max(1.0, T):
            raise OptimizationError(
                f"Extra start '{pulse.label}' lasts {pulse.duration}, expected {T}"
            )
        if not pulse.aligns_with_grid(n_segments):
            logger.warning(f"Extra start '{pulse.label}' is not representable on {n_segments} segments; resampling")
        starts.append(pulse.resample(n_segments).amplitudes)
    return starts


def optimize(
    model: NoiseModel,
    target: TargetLike,
    T: float,
    config: Optional[OptimizerConfig] = None,
    extra_starts: Sequence[PulseSequence] = (),
) -> OptimizationResult:
    """
    Maximize the gate fidelity over amplitudes on a uniform grid of duration T.

    Starts are the zero pulse and constant a_max (unless disabled), n_starts
    seeded random pulses and any extra_starts resampled onto the grid. Starts
    run in parallel; the best fidelity wins with ties going to the lowest
    start index. Deterministic for a given config.

    Args:
        model: Noise model
        target: "memory", "not" or an explicit unitary
        T: Total duration
        config: Optimizer settings (defaults from the application config)
        extra_starts: Additional initial pulses of duration T

    Returns:
        OptimizationResult for the best start
    """
    validate_positive("T", T, OptimizationError)
    config = config or OptimizerConfig()
    n_segments = config.segments_for(T)
    objective = FidelityObjective(model, target, T, n_segments)
    starts = _initial_conditions(T, n_segments, config, extra_starts)
    workers = config.n_workers or get_config().default_threads

    logger.info(
        f"Optimizing {target if isinstance(target, str) else 'custom'} target over T={T:.6g} "
        f"with {n_segments} segments, {len(starts)} starts, noise {model.describe()}"
    )
    with ThreadPoolExecutor(max_workers=workers) as executor:
        outcomes = list(executor.map(lambda start: ascend(objective, start, config), starts))

    for index, (_, fidelity, trace, iterations, termination) in enumerate(outcomes):
        logger.debug(
            f"Start {index}: {trace[0]:.10f} -> {fidelity:.10f} after {iterations} iterations ({termination})"
        )

    best_index = max(range(len(outcomes)), key=lambda i: (outcomes[i][1], -i))
    amplitudes, fidelity, trace, iterations, termination = outcomes[best_index]
    if termination != Termination.GRADIENT_TOLERANCE:
        logger.warning(f"Best start {best_index} stopped without converging ({termination})")

    pulse = uniform_pulse(amplitudes, T, config.amplitude_bound, label="optimized")
    return OptimizationResult(
        pulse=pulse,
        fidelity=fidelity,
        iterations=iterations,
        start_index=best_index,
        fidelity_trace=trace,
        converged=termination == Termination.GRADIENT_TOLERANCE,
        termination=termination,
        target=target if isinstance(target, str) else "custom",
        start_fidelities=[outcome[1] for outcome in outcomes],
        config=config.cache_fields(),
    )
