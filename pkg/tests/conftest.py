import os

import hypothesis
import numpy as np
import pytest

from core.constants import DESK_LEVEL_EXPONENT, DESK_RATE_SPAN
from core.experiments.cache import OptimizationCache
from core.noise.builders import build_multistate_fluctuator, build_one_over_f_noise, noise_free_model

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5)
hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture(scope="session")
def reference_fluctuator():
    """32 states, rates uniform on [1, 30], alpha = 1."""
    return build_multistate_fluctuator(5, 1.0, 29.0 / 30.0, 1.0)


@pytest.fixture(scope="session")
def desk_model():
    """8-state sweep noise at tau_c = 3."""
    return build_one_over_f_noise(3.0, m=DESK_LEVEL_EXPONENT, rate_span=DESK_RATE_SPAN)


@pytest.fixture(scope="session")
def quiet_model():
    return noise_free_model()


@pytest.fixture
def result_cache(tmp_path):
    return OptimizationCache(directory=tmp_path / "cache", enabled=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
