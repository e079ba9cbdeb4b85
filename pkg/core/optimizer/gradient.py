"""
Gate fidelity and its exact gradient on a uniform segment grid.

With F_0 = X (initial vectors of sigma_x, sigma_y, sigma_z) and segment
propagators P_j = exp(L(a_j) dt),

    Phi = 1/2 + (1/24) <C, P_n ... P_1 X>

where column k of C pairs each noise block with the Bloch coordinates of
U_f sigma_k U_f^dagger. The derivative of P_j along the control generator is
read off the augmented exponential exp([[A, E], [0, A]]) = [[P, D], [0, P]].
"""

import logging
from typing import Tuple

import numpy as np
from scipy.linalg import expm

from core.dynamics.master import BLOCK, get_propagator
from core.dynamics.operators import PAULIS, to_bloch
from core.exceptions import NumericalError, OptimizationError
from core.fidelity.metrics import TargetLike, target_unitary
from core.noise.model import NoiseModel
from core.pulses.sequence import PulseSequence
from core.validators import validate_positive

logger = logging.getLogger(__name__)


class FidelityObjective:
    """Phi(a_1..a_n) for a fixed model, target and uniform grid of duration T."""

    def __init__(self, model: NoiseModel, target: TargetLike, T: float, n_segments: int):
        validate_positive("T", T, OptimizationError)
        if n_segments < 1:
            raise OptimizationError(f"n_segments must be >= 1, got {n_segments}")
        self.model = model
        self.T = float(T)
        self.n_segments = int(n_segments)
        self.dt = self.T / self.n_segments
        self.target = target_unitary(target)

        propagator = get_propagator(model)
        self.dim = propagator.dim
        self._drift = propagator.drift * self.dt
        self._control = propagator.control * self.dt
        self._initial = propagator.basis_matrix()
        self._costate = self._target_matrix(model.M)

    def _target_matrix(self, M: int) -> np.ndarray:
        columns = np.zeros((BLOCK * M, 3))
        for k, sigma in enumerate(PAULIS):
            rotated = self.target @ sigma @ self.target.conj().T
            columns[:, k] = np.tile(to_bloch(rotated), M)
        return columns

    def _check(self, amplitudes: np.ndarray) -> np.ndarray:
        amplitudes = np.asarray(amplitudes, dtype=float).reshape(-1)
        if amplitudes.size != self.n_segments:
            raise OptimizationError(f"Expected {self.n_segments} amplitudes, got {amplitudes.size}")
        if not np.all(np.isfinite(amplitudes)):
            raise NumericalError("Non-finite control amplitudes")
        return amplitudes

    def _score(self, final: np.ndarray) -> float:
        value = 0.5 + float(np.sum(self._costate * final)) / 24.0
        if not np.isfinite(value):
            raise NumericalError("Fidelity evaluation produced a non-finite value")
        return value

    def value(self, amplitudes: np.ndarray) -> float:
        """Phi for the given segment amplitudes."""
        state = self._initial
        for a in self._check(amplitudes):
            state = expm(self._drift + a * self._control) @ state
        return self._score(state)

    def _segment_with_derivative(self, a: float) -> Tuple[np.ndarray, np.ndarray]:
        A = self._drift + a * self._control
        augmented = np.zeros((2 * self.dim, 2 * self.dim))
        augmented[: self.dim, : self.dim] = A
        augmented[self.dim :, self.dim :] = A
        augmented[: self.dim, self.dim :] = self._control
        exponential = expm(augmented)
        return exponential[: self.dim, : self.dim], exponential[: self.dim, self.dim :]

    def value_and_gradient(self, amplitudes: np.ndarray) -> Tuple[float, np.ndarray]:
        """Phi and dPhi/da_j by one forward and one backward sweep."""
        amplitudes = self._check(amplitudes)
        propagators = []
        derivatives = []
        forward = [self._initial]
        for a in amplitudes:
            P, D = self._segment_with_derivative(a)
            propagators.append(P)
            derivatives.append(D)
            forward.append(P @ forward[-1])

        gradient = np.empty(self.n_segments)
        backward = self._costate
        for j in range(self.n_segments - 1, -1, -1):
            gradient[j] = float(np.sum(backward * (derivatives[j] @ forward[j]))) / 24.0
            backward = propagators[j].T @ backward
        if not np.all(np.isfinite(gradient)):
            raise NumericalError("Fidelity gradient contains non-finite entries")
        return self._score(forward[-1]), gradient

    def gradient(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.value_and_gradient(amplitudes)[1]


def fidelity_gradient(model: NoiseModel, target: TargetLike, pulse: PulseSequence) -> np.ndarray:
    """
    Exact dPhi/da_j for each segment of a uniform pulse.

    Raises:
        OptimizationError: If the segment durations are not all equal
    """
    if not pulse.is_uniform():
        raise OptimizationError("Gradient requires equal-duration segments")
    objective = FidelityObjective(model, target, pulse.duration, len(pulse))
    return objective.gradient(pulse.amplitudes)
