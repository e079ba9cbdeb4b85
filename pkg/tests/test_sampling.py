import math

import numpy as np
import pytest

from core.exceptions import NoiseModelError
from core.noise import (
    NoiseTrajectory,
    build_multistate_fluctuator,
    build_rtn_ensemble,
    psd,
    sample_paths_on_grid,
    sample_trajectory,
    sample_values,
)
from core.noise.sampling import jump_table
from core.noise.spectrum import periodogram


def test_sampling_is_deterministic_per_seed(desk_model):
    first = sample_trajectory(desk_model, 50.0, seed=11)
    second = sample_trajectory(desk_model, 50.0, seed=11)
    other = sample_trajectory(desk_model, 50.0, seed=12)

    assert first.switch_times == second.switch_times
    assert first.state_indices == second.state_indices
    assert first.switch_times != other.switch_times


def test_holding_times_match_exit_rate():
    model = build_rtn_ensemble([1.0], [1.0])
    path = sample_trajectory(model, 4000.0, seed=3)
    holding = path.holding_times()

    assert holding.size > 1000
    # Exponential holding times with rate 1: mean 1, standard deviation 1
    assert abs(holding.mean() - 1.0) < 4.0 / math.sqrt(holding.size)
    occupancy = path.occupancy(model.M)
    assert occupancy.sum() == pytest.approx(1.0)
    assert abs(occupancy[0] - 0.5) < 0.05


def test_jump_destinations_follow_generator(desk_model):
    exit_rates, cumulative = jump_table(desk_model)
    np.testing.assert_allclose(exit_rates, -np.diag(desk_model.gamma))
    np.testing.assert_allclose(cumulative[:, -1], 1.0)
    assert np.all(np.diff(cumulative, axis=1) >= -1e-15)


def test_state_lookup_is_right_continuous():
    path = NoiseTrajectory(switch_times=(1.0, 2.5), state_indices=(0, 3, 1), total_time=4.0)

    assert path.state_at(0.0) == 0
    assert path.state_at(1.0) == 3
    assert path.state_at(2.4) == 3
    np.testing.assert_array_equal(path.state_at(np.array([0.5, 3.0])), [0, 1])
    np.testing.assert_allclose(path.holding_times(include_censored=True), [1.0, 1.5, 1.5])
    np.testing.assert_allclose(path.holding_times(), [1.5])
    assert path.n_switches == 2


@pytest.mark.parametrize(
    "kwargs",
    [
        {"switch_times": (2.0, 1.0), "state_indices": (0, 1, 0), "total_time": 3.0},
        {"switch_times": (1.0,), "state_indices": (0,), "total_time": 3.0},
        {"switch_times": (3.0,), "state_indices": (0, 1), "total_time": 3.0},
        {"switch_times": (1.0,), "state_indices": (1, 1), "total_time": 3.0},
        {"switch_times": (), "state_indices": (0,), "total_time": 0.0},
    ],
)
def test_trajectory_validation(kwargs):
    with pytest.raises(NoiseModelError):
        NoiseTrajectory(**kwargs)


def test_noise_free_path_never_switches(quiet_model):
    path = sample_trajectory(quiet_model, 10.0, seed=0)
    assert path.n_switches == 0
    np.testing.assert_array_equal(sample_values(path, quiet_model, np.linspace(0, 9, 4)), 0.0)


def test_periodogram_matches_telegraph_psd():
    model = build_rtn_ensemble([1.0], [1.0])
    dt = 0.05
    samples = sample_paths_on_grid(model, 200.0, dt, n_paths=60, seed=5)
    f, estimate = periodogram(samples, dt)

    assert samples.shape[0] == 60
    band = (f >= 0.05) & (f <= 0.5)
    ratio = estimate[band].sum() / psd(model, f[band]).sum()
    assert ratio == pytest.approx(1.0, abs=0.1)


def test_periodogram_matches_multistate_psd_in_every_band():
    model = build_multistate_fluctuator(4, gamma_min=0.1, delta=0.1, alpha=1.0)
    dt = 0.1
    samples = sample_paths_on_grid(model, 400.0, dt, n_paths=256, seed=8)
    f, estimate = periodogram(samples, dt)

    # Angular frequency between twice the slowest rate and half the fastest
    omega = 2.0 * math.pi * f
    inside = np.flatnonzero((omega >= 2.0 * min(model.gamma_grid)) & (omega <= 0.5 * max(model.gamma_grid)))
    assert inside.size >= 24
    for band in np.array_split(inside, 4):
        ratio = estimate[band].mean() / psd(model, f[band]).mean()
        assert ratio == pytest.approx(1.0, abs=0.15)


def test_multistate_occupancy_is_uniform():
    model = build_multistate_fluctuator(2, gamma_min=1.0, delta=1.0, alpha=1.0)
    path = sample_trajectory(model, 50000.0, seed=9)
    occupancy = path.occupancy(model.M)

    assert path.n_switches > 10000
    assert occupancy.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(occupancy, np.full(model.M, 1.0 / model.M), atol=0.02)
