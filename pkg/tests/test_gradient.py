import numpy as np
import pytest

from core.constants import Target
from core.exceptions import OptimizationError
from core.fidelity import noisy_gate_fidelity
from core.noise import build_multistate_fluctuator, build_one_over_f_noise, build_rtn_ensemble, noise_free_model
from core.optimizer import FidelityObjective, fidelity_gradient
from core.pulses import pulse_from_segments, uniform_pulse

MODELS = [
    noise_free_model(),
    build_rtn_ensemble([0.3, 0.15], [2.0, 0.5]),
    build_one_over_f_noise(3.0, m=3, rate_span=7.0, strength=0.3),
    build_multistate_fluctuator(2, 1.0, 0.5, 1.0),
]


def central_differences(objective: FidelityObjective, amplitudes: np.ndarray, h: float = 1e-5) -> np.ndarray:
    gradient = np.empty_like(amplitudes)
    for j in range(amplitudes.size):
        step = np.zeros_like(amplitudes)
        step[j] = h
        gradient[j] = (objective.value(amplitudes + step) - objective.value(amplitudes - step)) / (2 * h)
    return gradient


@pytest.mark.parametrize("instance", range(20))
def test_gradient_matches_finite_differences(instance):
    rng = np.random.default_rng(1000 + instance)
    model = MODELS[instance % len(MODELS)]
    target = Target.MEMORY if instance % 2 == 0 else Target.NOT
    n_segments = int(rng.integers(1, 13))
    T = float(rng.uniform(1.0, 8.0))
    amplitudes = rng.uniform(-0.8, 0.8, size=n_segments)

    objective = FidelityObjective(model, target, T, n_segments)
    value, gradient = objective.value_and_gradient(amplitudes)

    assert value == pytest.approx(objective.value(amplitudes), abs=1e-13)
    np.testing.assert_allclose(gradient, central_differences(objective, amplitudes), rtol=1e-6, atol=1e-8)


def test_objective_agrees_with_master_equation(desk_model):
    amplitudes = np.array([0.9, -0.4, 0.1, 1.0, -1.0, 0.3])
    pulse = uniform_pulse(amplitudes, 5.0)
    objective = FidelityObjective(desk_model, Target.NOT, 5.0, 6)

    assert objective.value(amplitudes) == pytest.approx(noisy_gate_fidelity(desk_model, pulse, Target.NOT), abs=1e-12)
    np.testing.assert_allclose(
        fidelity_gradient(desk_model, Target.NOT, pulse), objective.gradient(amplitudes), atol=1e-14
    )


def test_objective_accepts_explicit_target(desk_model):
    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    objective = FidelityObjective(desk_model, hadamard, 3.0, 4)
    value, gradient = objective.value_and_gradient(np.zeros(4))
    assert 0.0 <= value <= 1.0
    assert gradient.shape == (4,)


def test_objective_input_validation(desk_model):
    objective = FidelityObjective(desk_model, Target.MEMORY, 2.0, 3)
    with pytest.raises(OptimizationError):
        objective.value(np.zeros(4))
    with pytest.raises(OptimizationError):
        FidelityObjective(desk_model, Target.MEMORY, 0.0, 3)
    with pytest.raises(OptimizationError):
        FidelityObjective(desk_model, Target.MEMORY, 2.0, 0)
    with pytest.raises(OptimizationError, match="equal-duration"):
        fidelity_gradient(desk_model, Target.MEMORY, pulse_from_segments([(1.0, 1.0), (0.0, 2.0)]))
