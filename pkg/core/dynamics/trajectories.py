"""Unitary quantum trajectories and their Monte Carlo average."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from core.config import get_config
from core.constants import DEFAULT_MC_SHARDS, MIN_TRAJECTORIES
from core.dynamics.operators import PAULI_I, PAULI_X, PAULI_Z, from_bloch, to_bloch
from core.exceptions import DynamicsError
from core.noise.model import NoiseModel
from core.noise.sampling import NoiseTrajectory, SeedLike, jump_table, sample_trajectory
from core.pulses.sequence import PulseSequence
from core.validators import validate_qubit_operator

logger = logging.getLogger(__name__)


def segment_unitary(a: float, b: float, dt: float) -> np.ndarray:
    """
    exp(-i H dt) for H = (a sigma_x + b sigma_z)/2.

    Closed form cos(theta) I - i sin(theta) (a sigma_x + b sigma_z)/Omega with
    Omega = sqrt(a^2 + b^2) and theta = Omega dt / 2.
    """
    omega = math.hypot(a, b)
    if omega == 0.0:
        return PAULI_I.copy()
    theta = 0.5 * omega * dt
    return math.cos(theta) * PAULI_I - 1j * math.sin(theta) * (a * PAULI_X + b * PAULI_Z) / omega


def pulse_unitary(pulse: PulseSequence, bias: float = 0.0) -> np.ndarray:
    """Total unitary of a pulse under a static sigma_z bias b (noise frozen at one value)."""
    U = PAULI_I.copy()
    for amplitude, duration in pulse.segments:
        U = segment_unitary(amplitude, bias, duration) @ U
    return U


def _intervals(pulse: PulseSequence, trajectory: NoiseTrajectory, model: NoiseModel) -> List[Tuple[float, float, float]]:
    """Maximal (a, b, dt) intervals on which both control and noise value are constant."""
    edges = np.union1d(pulse.boundaries, np.asarray(trajectory.switch_times))
    midpoints = 0.5 * (edges[:-1] + edges[1:])
    widths = np.diff(edges)
    amplitudes = np.atleast_1d(pulse.amplitude_at(midpoints))
    biases = model.b[np.atleast_1d(trajectory.state_at(midpoints))]

    merged: List[List[float]] = []
    for a, b, dt in zip(amplitudes, biases, widths):
        if dt <= 0:
            continue
        if merged and merged[-1][0] == a and merged[-1][1] == b:
            merged[-1][2] += dt
        else:
            merged.append([float(a), float(b), float(dt)])
    return [tuple(item) for item in merged]


def trajectory_unitary(pulse: PulseSequence, trajectory: NoiseTrajectory, model: NoiseModel) -> np.ndarray:
    """Unitary generated by one noise path under the pulse."""
    T = pulse.duration
    if abs(trajectory.total_time - T) > 1e-9 * max(1.0, T):
        raise DynamicsError(
            f"Trajectory length {trajectory.total_time} does not match pulse duration {T}"
        )
    U = PAULI_I.copy()
    for a, b, dt in _intervals(pulse, trajectory, model):
        U = segment_unitary(a, b, dt) @ U
    return U


def propagate_trajectory(
    pulse: PulseSequence, trajectory: NoiseTrajectory, model: NoiseModel, initial: np.ndarray
) -> np.ndarray:
    """U rho U^dagger for the unitary of a single noise path."""
    rho = validate_qubit_operator(initial, "initial")
    U = trajectory_unitary(pulse, trajectory, model)
    return U @ rho @ U.conj().T


@dataclass(frozen=True, eq=False)
class MonteCarloEstimate:
    """Trajectory-averaged operator with standard errors of its Bloch coordinates."""

    mean: np.ndarray
    bloch_mean: np.ndarray
    bloch_standard_error: np.ndarray
    n_trajectories: int

    @property
    def standard_error(self) -> np.ndarray:
        """Per-entry standard error: real part for Re(rho_ij), imaginary part for Im(rho_ij)."""
        s0, sx, sy, sz = self.bloch_standard_error / 2.0
        diagonal = math.hypot(s0, sz)
        return np.array([[diagonal, sx + 1j * sy], [sx + 1j * sy, diagonal]])

    @property
    def trace_distance_standard_error(self) -> float:
        """Standard error of the Bloch-vector estimate in trace-distance units."""
        return 0.5 * float(np.linalg.norm(self.bloch_standard_error[1:]))


def _run_shard(
    model: NoiseModel,
    pulse: PulseSequence,
    bloch_initial: np.ndarray,
    count: int,
    seed: np.random.SeedSequence,
    table: Tuple[np.ndarray, np.ndarray],
) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    rho = from_bloch(bloch_initial)
    total = np.zeros(4)
    squares = np.zeros(4)
    for _ in range(count):
        path = sample_trajectory(model, pulse.duration, rng, table=table)
        U = trajectory_unitary(pulse, path, model)
        r = to_bloch(U @ rho @ U.conj().T)
        total += r
        squares += r * r
    return total, squares


def monte_carlo_average(
    model: NoiseModel,
    pulse: PulseSequence,
    initial: np.ndarray,
    n_trajectories: int,
    seed: SeedLike,
    n_workers: Optional[int] = None,
    n_shards: int = DEFAULT_MC_SHARDS,
) -> MonteCarloEstimate:
    """
    Average U rho U^dagger over independently sampled noise paths.

    Trajectories are split into n_shards with seeds spawned from one
    SeedSequence; shards run in a thread pool and are reduced in shard order,
    so the result is bit-identical for a given seed regardless of n_workers.

    Raises:
        DynamicsError: If n_trajectories < 100
    """
    if n_trajectories < MIN_TRAJECTORIES:
        raise DynamicsError(f"Need at least {MIN_TRAJECTORIES} trajectories, got {n_trajectories}")
    bloch_initial = to_bloch(validate_qubit_operator(initial, "initial"))
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(
        seed if not isinstance(seed, np.random.Generator) else seed.integers(2**63)
    )
    n_shards = max(1, min(n_shards, n_trajectories))
    counts = [n_trajectories // n_shards + (i < n_trajectories % n_shards) for i in range(n_shards)]
    table = jump_table(model)
    workers = n_workers or get_config().default_threads

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(_run_shard, model, pulse, bloch_initial, count, child, table)
            for count, child in zip(counts, root.spawn(n_shards))
        ]
        results = [future.result() for future in futures]

    total = np.zeros(4)
    squares = np.zeros(4)
    for shard_total, shard_squares in results:
        total += shard_total
        squares += shard_squares
    mean = total / n_trajectories
    variance = np.maximum(squares / n_trajectories - mean ** 2, 0.0) * n_trajectories / (n_trajectories - 1)
    standard_error = np.sqrt(variance / n_trajectories)
    logger.debug(
        f"Monte Carlo average of {n_trajectories} trajectories over {n_shards} shards "
        f"(max Bloch s.e. {float(np.max(standard_error)):.2e})"
    )
    return MonteCarloEstimate(
        mean=from_bloch(mean),
        bloch_mean=mean,
        bloch_standard_error=standard_error,
        n_trajectories=n_trajectories,
    )
