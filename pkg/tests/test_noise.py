import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import NoiseModelError
from core.noise import (
    Construction,
    NoiseModel,
    build_multistate_fluctuator,
    build_one_over_f_noise,
    build_rtn_ensemble,
    noise_free_model,
    scale_to_strength,
    spectral_decomposition,
)
from core.noise.generators import hadamard_basis


@settings(max_examples=20, deadline=None)
@given(
    m=st.integers(min_value=2, max_value=5),
    gamma_min=st.floats(min_value=0.01, max_value=1.0),
    ratio=st.floats(min_value=0.01, max_value=1.0),
    alpha=st.floats(min_value=0.05, max_value=1.95),
)
def test_fluctuator_generator_is_valid(m, gamma_min, ratio, alpha):
    model = build_multistate_fluctuator(m, gamma_min, ratio * gamma_min, alpha)
    gamma = model.gamma
    off_diagonal = gamma[~np.eye(model.M, dtype=bool)]

    assert model.M == 2 ** m
    assert np.array_equal(gamma, gamma.T)
    assert np.max(np.abs(gamma.sum(axis=0))) < 1e-12
    assert off_diagonal.min() >= -1e-12
    assert abs(model.b.sum()) < 1e-9


def test_fluctuator_spectrum_matches_rate_grid(reference_fluctuator):
    rates = 1.0 + (29.0 / 30.0) * np.arange(31)
    decomposition = spectral_decomposition(reference_fluctuator)

    np.testing.assert_allclose(decomposition.eigenvalues, np.concatenate(([0.0], -2.0 * rates)), atol=1e-10)
    np.testing.assert_allclose(np.abs(decomposition.chi[1:]), rates ** -0.5, rtol=1e-10)
    assert abs(decomposition.chi[0]) < 1e-12
    assert decomposition.eigenvalues[1:].min() == pytest.approx(-60.0)
    assert decomposition.eigenvalues[1:].max() == pytest.approx(-2.0)


def test_fluctuator_prefactor_is_half_inverse_spacing():
    model = build_multistate_fluctuator(3, 2.0, 0.5, 1.0)
    assert model.A == pytest.approx(1.0)
    assert model.construction == Construction.HADAMARD
    assert model.gamma_grid == pytest.approx(tuple(2.0 + 0.5 * np.arange(7)))


def test_hadamard_basis_is_orthogonal():
    V = hadamard_basis(4)
    np.testing.assert_allclose(V @ V.T, np.eye(16), atol=1e-14)
    np.testing.assert_allclose(V[:, 0], np.full(16, 0.25))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"m": 1, "gamma_min": 1.0, "delta": 0.5, "alpha": 1.0},
        {"m": 3, "gamma_min": 1.0, "delta": 1.5, "alpha": 1.0},
        {"m": 3, "gamma_min": -1.0, "delta": 0.5, "alpha": 1.0},
        {"m": 3, "gamma_min": 1.0, "delta": 0.5, "alpha": 2.0},
        {"m": 3, "gamma_min": 1.0, "delta": 0.0, "alpha": 1.0},
    ],
)
def test_fluctuator_rejects_invalid_parameters(kwargs):
    with pytest.raises(NoiseModelError):
        build_multistate_fluctuator(**kwargs)


def test_rtn_pair_enumerates_sign_combinations():
    model = build_rtn_ensemble([1.0, 1.0], [1.0 / 0.3, 1.0 / 0.7])

    np.testing.assert_allclose(model.b, [2.0, 0.0, 0.0, -2.0])
    assert model.gamma[1, 0] == pytest.approx(0.3)
    assert model.gamma[2, 0] == pytest.approx(0.7)
    assert model.gamma[3, 0] == 0.0
    assert model.gamma[0, 0] == pytest.approx(-1.0)
    assert model.construction == Construction.RTN_ENSEMBLE


def test_rtn_ensemble_validation():
    with pytest.raises(NoiseModelError, match="matching"):
        build_rtn_ensemble([1.0, 2.0], [1.0])
    with pytest.raises(NoiseModelError, match="cap"):
        build_rtn_ensemble([1.0, 1.0, 1.0], [1.0, 2.0, 3.0], max_fluctuators=2)
    with pytest.raises(NoiseModelError):
        build_rtn_ensemble([1.0], [0.0])


def test_noise_model_rejects_broken_generators():
    with pytest.raises(NoiseModelError, match="symmetric"):
        NoiseModel(gamma=np.array([[-1.0, 2.0], [1.0, -2.0]]), b=np.array([1.0, -1.0]))
    with pytest.raises(NoiseModelError, match="sum to zero"):
        NoiseModel(gamma=np.array([[-1.0, 1.0], [1.0, -1.0]]), b=np.array([1.0, 0.5]))
    with pytest.raises(NoiseModelError, match="negative"):
        NoiseModel(gamma=np.array([[1.0, -1.0], [-1.0, 1.0]]), b=np.array([1.0, -1.0]))
    with pytest.raises(NoiseModelError, match="length"):
        NoiseModel(gamma=np.array([[-1.0, 1.0], [1.0, -1.0]]), b=np.array([1.0, -1.0, 0.0]))


def test_noise_model_arrays_are_read_only(desk_model):
    with pytest.raises(ValueError):
        desk_model.b[0] = 0.0


def test_noise_free_model():
    model = noise_free_model()
    assert model.M == 1
    assert model.is_noise_free
    assert model.mean_abs_amplitude == 0.0


def test_scale_to_strength(reference_fluctuator):
    scaled = scale_to_strength(reference_fluctuator, 0.125)
    factor = 0.125 / reference_fluctuator.mean_abs_amplitude

    assert scaled.mean_abs_amplitude == pytest.approx(0.125)
    assert scaled.A == pytest.approx(reference_fluctuator.A * factor ** 2)
    np.testing.assert_array_equal(scaled.gamma, reference_fluctuator.gamma)
    with pytest.raises(NoiseModelError):
        scale_to_strength(noise_free_model(), 0.1)


def test_sweep_noise_spans_requested_rates():
    model = build_one_over_f_noise(4.0, m=3, rate_span=7.0, strength=0.2)

    assert model.M == 8
    assert model.gamma_grid[0] == pytest.approx(0.25)
    assert model.gamma_grid[-1] == pytest.approx(7.0 / 4.0)
    assert model.mean_abs_amplitude == pytest.approx(0.2)


def test_sweep_noise_rejects_unreachable_span():
    with pytest.raises(NoiseModelError, match="rate_span"):
        build_one_over_f_noise(1.0, m=3, rate_span=30.0)


def test_serialization_reconstructs_generator(desk_model):
    ensemble = build_rtn_ensemble([0.3, 0.2], [1.0, 5.0], alpha=1.0, A=2.0)
    custom = NoiseModel(gamma=np.array([[-0.5, 0.5], [0.5, -0.5]]), b=np.array([0.1, -0.1]))

    for model in (desk_model, ensemble, custom):
        restored = NoiseModel.from_json(model.to_json())
        assert restored.fingerprint == model.fingerprint
        assert restored.construction == model.construction
        assert restored.A == model.A

    assert "gamma" not in desk_model.to_dict()
    assert "gamma" in custom.to_dict()


def test_from_dict_rejects_state_count_mismatch(desk_model):
    data = desk_model.to_dict()
    data["M"] = 16
    with pytest.raises(NoiseModelError, match="M=16"):
        NoiseModel.from_dict(data)


def test_describe_mentions_state_count(desk_model):
    text = desk_model.describe()
    assert "M=8" in text
    assert "alpha=1" in text
    assert math.isfinite(desk_model.mean_abs_amplitude)
