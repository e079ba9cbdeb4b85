"""
Coupled master equations for the conditional density operators rho_k.

Each rho_k is stored by its real Bloch 4-vector (tr rho_k, tr rho_k sigma_x,
tr rho_k sigma_y, tr rho_k sigma_z); the M blocks are stacked state-major
into a vector of length 4M. Under H_k = (a sigma_x + b_k sigma_z)/2 the Bloch
vector rotates as dr/dt = h x r with h = (a, 0, b_k), and the noise couples
blocks through Gamma, so the stacked generator is

    L(a) = kron(Gamma, I_4) + kron(diag(b), Z) + a kron(I_M, X)

with Z, X the real rotation generators about z and x. For a piecewise-constant
pulse each segment is propagated exactly with scipy.linalg.expm.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.linalg import expm

from core.config import get_config
from core.constants import ALGEBRA_TOLERANCE, DEFAULT_A_MAX
from core.dynamics.operators import PAULI_X, PAULI_Z, from_bloch, to_bloch
from core.exceptions import DynamicsError, NumericalError
from core.noise.model import NoiseModel
from core.pulses.sequence import PulseSequence
from core.utils.cache import LRUCache
from core.validators import is_hermitian, validate_qubit_operator

logger = logging.getLogger(__name__)

BLOCK = 4

# Rotation generators on (r0, rx, ry, rz)
_Z_ROTATION = np.zeros((BLOCK, BLOCK))
_Z_ROTATION[1, 2] = -1.0
_Z_ROTATION[2, 1] = 1.0
_X_ROTATION = np.zeros((BLOCK, BLOCK))
_X_ROTATION[2, 3] = -1.0
_X_ROTATION[3, 2] = 1.0


def conditional_hamiltonian(
    model: NoiseModel, k: int, a: float, a_max: float = DEFAULT_A_MAX
) -> np.ndarray:
    """
    Hamiltonian H_k = (a sigma_x + b_k sigma_z)/2 while the noise sits in state k.

    Args:
        model: Noise model supplying b_k
        k: Noise state index in [0, M)
        a: Control amplitude, |a| <= a_max

    Raises:
        DynamicsError: If k is out of range or |a| exceeds a_max
    """
    if int(k) != k or not 0 <= k < model.M:
        raise DynamicsError(f"State index {k} out of range for M={model.M}")
    if not np.isfinite(a) or abs(a) > a_max:
        raise DynamicsError(f"Control amplitude {a} violates |a| <= {a_max}")
    return 0.5 * (a * PAULI_X + model.b[int(k)] * PAULI_Z)


@dataclass(frozen=True, eq=False)
class ConditionalState:
    """Conditional operators rho_k at a given time, stored as stacked Bloch vectors."""

    vector: np.ndarray
    time: float = 0.0

    @property
    def M(self) -> int:
        return self.vector.shape[0] // BLOCK

    @property
    def blocks(self) -> np.ndarray:
        """Array of shape (M, 4) with the Bloch coordinates of each rho_k."""
        return self.vector.reshape(self.M, BLOCK)

    @property
    def rhos(self) -> List[np.ndarray]:
        return [from_bloch(block) for block in self.blocks]

    @property
    def probabilities(self) -> np.ndarray:
        """P_k = tr rho_k."""
        return self.blocks[:, 0].copy()

    @property
    def trace(self) -> float:
        return float(self.blocks[:, 0].sum())

    @property
    def total(self) -> np.ndarray:
        """rho = sum_k rho_k."""
        return from_bloch(self.blocks.sum(axis=0))


class MasterEquationPropagator:
    """
    Exact piecewise-constant propagation of the stacked conditional state.

    Generators are cached per amplitude and segment propagators per
    (amplitude, duration), so reference sequences built from +-a_max and 0
    exponentiate only a handful of matrices.
    """

    def __init__(self, model: NoiseModel, cache_size: Optional[int] = None):
        self.model = model
        self.M = model.M
        self.dim = BLOCK * model.M
        size = cache_size or get_config().numerics.propagator_cache_size
        self.drift = np.kron(model.gamma, np.eye(BLOCK)) + np.kron(np.diag(model.b), _Z_ROTATION)
        self.control = np.kron(np.eye(model.M), _X_ROTATION)
        self._generators: LRUCache[np.ndarray] = LRUCache(max_size=size)
        self._propagators: LRUCache[np.ndarray] = LRUCache(max_size=size)

    def generator(self, a: float) -> np.ndarray:
        """Stacked generator L(a)."""
        return self._generators.get_or_compute(float(a), lambda: self.drift + float(a) * self.control)

    def segment_propagator(self, a: float, dt: float) -> np.ndarray:
        """exp(L(a) dt)."""
        key = (float(a), float(dt))

        def compute() -> np.ndarray:
            propagator = expm(self.generator(a) * dt)
            if not np.all(np.isfinite(propagator)):
                raise NumericalError(f"Non-finite segment propagator for a={a}, dt={dt}")
            return propagator

        return self._propagators.get_or_compute(key, compute)

    def initial_vector(self, initial: np.ndarray) -> np.ndarray:
        """Stacked vector for rho_k(0) = initial / M."""
        op = validate_qubit_operator(initial, "initial")
        if not is_hermitian(op, ALGEBRA_TOLERANCE * max(1.0, float(np.max(np.abs(op))))):
            raise DynamicsError("Initial operator must be Hermitian")
        return np.tile(to_bloch(op) / self.M, self.M)

    def basis_matrix(self) -> np.ndarray:
        """Columns are the initial vectors of sigma_x, sigma_y, sigma_z."""
        columns = np.zeros((self.dim, 3))
        for k in range(3):
            columns[1 + k :: BLOCK, k] = 2.0 / self.M
        return columns

    def collapse(self, vectors: np.ndarray) -> np.ndarray:
        """Total Bloch coordinates sum_k r_k for a vector or for each column of a matrix."""
        if vectors.ndim == 1:
            return vectors.reshape(self.M, BLOCK).sum(axis=0)
        return vectors.reshape(self.M, BLOCK, -1).sum(axis=0)

    def propagate_vector(self, pulse: PulseSequence, vector: np.ndarray) -> np.ndarray:
        """Apply every segment propagator to a stacked vector (or matrix of columns)."""
        result = np.asarray(vector, dtype=float)
        for amplitude, duration in pulse.segments:
            result = self.segment_propagator(amplitude, duration) @ result
        return result

    def propagate(self, pulse: PulseSequence, initial: np.ndarray) -> ConditionalState:
        """Final conditional state after the pulse, starting from initial/M in every block."""
        vector = self.propagate_vector(pulse, self.initial_vector(initial))
        return ConditionalState(vector=vector, time=pulse.duration)

    def time_series(self, pulse: PulseSequence, initial: np.ndarray) -> List[ConditionalState]:
        """Conditional states at t = 0 and at every segment boundary."""
        vector = self.initial_vector(initial)
        states = [ConditionalState(vector=vector, time=0.0)]
        for (amplitude, duration), t in zip(pulse.segments, pulse.boundaries[1:]):
            vector = self.segment_propagator(amplitude, duration) @ vector
            states.append(ConditionalState(vector=vector, time=float(t)))
        return states

    def evolve_operator_basis(self, pulse: Optional[PulseSequence]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Total evolved operators E(sigma_x), E(sigma_y), E(sigma_z); pulse None is the identity map."""
        columns = self.basis_matrix()
        if pulse is not None:
            columns = self.propagate_vector(pulse, columns)
        totals = self.collapse(columns)
        return tuple(from_bloch(totals[:, k]) for k in range(3))


_registry: LRUCache[MasterEquationPropagator] = LRUCache(max_size=64)


def get_propagator(model: NoiseModel) -> MasterEquationPropagator:
    """Shared propagator for a model, keyed by its content fingerprint."""
    return _registry.get_or_compute(model.fingerprint, lambda: MasterEquationPropagator(model))


def propagate_master(model: NoiseModel, pulse: PulseSequence, initial: np.ndarray) -> ConditionalState:
    """Evolve initial/M in every noise state under the coupled master equations."""
    return get_propagator(model).propagate(pulse, initial)


def evolve_operator_basis(
    model: NoiseModel, pulse: Optional[PulseSequence]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Apply the averaged evolution map to sigma_x, sigma_y and sigma_z."""
    return get_propagator(model).evolve_operator_basis(pulse)


def time_series_frame(states: Sequence[ConditionalState]) -> pd.DataFrame:
    """Tabular time series: t, Re/Im of the total rho entries, then P_0..P_{M-1}."""
    if not states:
        raise DynamicsError("Time series is empty")
    rows = []
    for state in states:
        rho = state.total
        row = {"t": state.time}
        for i in range(2):
            for j in range(2):
                row[f"rho{i}{j}_re"] = rho[i, j].real
                row[f"rho{i}{j}_im"] = rho[i, j].imag
        for k, probability in enumerate(state.probabilities):
            row[f"P_{k}"] = probability
        rows.append(row)
    return pd.DataFrame(rows)


def write_time_series_csv(states: Sequence[ConditionalState], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    time_series_frame(states).to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Wrote {len(states)} time-series rows to {path}")
    return path
