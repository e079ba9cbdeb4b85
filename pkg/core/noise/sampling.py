"""Sample paths of the Markov noise process (Monte Carlo support)."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from core.exceptions import NoiseModelError
from core.noise.model import NoiseModel
from core.validators import validate_positive

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.Generator, np.random.SeedSequence]


@dataclass(frozen=True, eq=False)
class NoiseTrajectory:
    """
    Piecewise-constant noise path on [0, total_time].

    state_indices[0] is the initial state and state_indices[i + 1] the state
    entered at switch_times[i].
    """

    switch_times: Tuple[float, ...]
    state_indices: Tuple[int, ...]
    total_time: float
    _times: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        times = np.asarray(self.switch_times, dtype=float).reshape(-1)
        states = tuple(int(s) for s in self.state_indices)
        validate_positive("total_time", self.total_time, NoiseModelError)
        if len(states) != times.size + 1:
            raise NoiseModelError(
                f"Expected {times.size + 1} state indices for {times.size} switches, got {len(states)}"
            )
        if times.size:
            if np.any(np.diff(times) <= 0):
                raise NoiseModelError("Switch times must be strictly increasing")
            if times[0] <= 0 or times[-1] >= self.total_time:
                raise NoiseModelError("Switch times must lie strictly inside (0, total_time)")
        if any(s < 0 for s in states):
            raise NoiseModelError("State indices must be non-negative")
        if any(a == b for a, b in zip(states, states[1:])):
            raise NoiseModelError("Consecutive state indices must differ")
        times.setflags(write=False)
        object.__setattr__(self, "switch_times", tuple(times.tolist()))
        object.__setattr__(self, "state_indices", states)
        object.__setattr__(self, "total_time", float(self.total_time))
        object.__setattr__(self, "_times", times)

    @property
    def n_switches(self) -> int:
        return len(self.switch_times)

    def state_at(self, t: Union[float, np.ndarray]) -> Union[int, np.ndarray]:
        """Noise state occupied at time(s) t (right-continuous at switches)."""
        positions = np.searchsorted(self._times, np.asarray(t, dtype=float), side="right")
        states = np.asarray(self.state_indices)[positions]
        return int(states) if states.ndim == 0 else states

    def holding_times(self, include_censored: bool = False) -> np.ndarray:
        """
        Sojourn durations between switches.

        The first and last sojourns are censored by the observation window and
        are excluded unless include_censored is set.
        """
        edges = np.concatenate(([0.0], self._times, [self.total_time]))
        durations = np.diff(edges)
        if include_censored:
            return durations
        return durations[1:-1]

    def occupancy(self, n_states: int) -> np.ndarray:
        """Fraction of total_time spent in each state."""
        durations = self.holding_times(include_censored=True)
        fractions = np.bincount(np.asarray(self.state_indices), weights=durations, minlength=n_states)
        return fractions / self.total_time


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def jump_table(model: NoiseModel) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exit rates and per-state cumulative jump distributions.

    Returns:
        Tuple of (exit_rates, cumulative) where cumulative[k] is the normalized
        cumulative distribution of the destination when leaving state k
    """
    exit_rates = -np.diag(model.gamma).copy()
    off_diagonal = model.gamma.copy()
    np.fill_diagonal(off_diagonal, 0.0)
    cumulative = np.cumsum(off_diagonal, axis=0).T
    totals = cumulative[:, -1:]
    safe = np.where(totals > 0, totals, 1.0)
    return exit_rates, cumulative / safe


def sample_trajectory(
    model: NoiseModel,
    total_time: float,
    seed: SeedLike,
    table: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> NoiseTrajectory:
    """
    Sample a continuous-time Markov chain path of the noise state.

    The initial state is uniform (the stationary law), holding times are
    exponential with rate -Gamma_kk and the chain jumps to j != k with
    probability Gamma_jk / (-Gamma_kk). Deterministic given the seed.

    Args:
        model: Noise model
        total_time: Path length
        seed: Integer seed or an existing Generator
        table: Precomputed jump_table(model), reused across many paths
    """
    validate_positive("total_time", total_time)
    rng = _rng(seed)
    exit_rates, cumulative = table if table is not None else jump_table(model)

    state = int(rng.integers(model.M))
    t = 0.0
    times = []
    states = [state]
    while exit_rates[state] > 0:
        t += rng.exponential(1.0 / exit_rates[state])
        if t >= total_time:
            break
        state = int(np.searchsorted(cumulative[state], rng.random(), side="right"))
        times.append(t)
        states.append(state)
    return NoiseTrajectory(switch_times=tuple(times), state_indices=tuple(states), total_time=total_time)


def sample_values(trajectory: NoiseTrajectory, model: NoiseModel, times: np.ndarray) -> np.ndarray:
    """Noise amplitude eta(t) = b[state(t)] at the requested times."""
    return model.b[np.asarray(trajectory.state_at(times))]


def sample_paths_on_grid(
    model: NoiseModel, total_time: float, dt: float, n_paths: int, seed: SeedLike
) -> np.ndarray:
    """
    Sample n_paths independent paths of eta on the grid t = 0, dt, 2 dt, ...

    Returns:
        Array of shape (n_paths, n_samples)
    """
    validate_positive("dt", dt)
    rng = _rng(seed)
    table = jump_table(model)
    grid = np.arange(0.0, total_time, dt)
    samples = np.empty((n_paths, grid.size))
    for index in range(n_paths):
        path = sample_trajectory(model, total_time, rng, table=table)
        samples[index] = sample_values(path, model, grid)
    logger.debug(f"Sampled {n_paths} paths of {grid.size} points")
    return samples
