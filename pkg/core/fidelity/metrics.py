"""State and gate fidelities for noisy single-qubit operations."""

import logging
from dataclasses import asdict, dataclass
from typing import Optional, Sequence, Union

import numpy as np

from core.constants import ALGEBRA_TOLERANCE, FIDELITY_TOLERANCE, Target
from core.dynamics.master import evolve_operator_basis
from core.dynamics.operators import PAULI_I, PAULI_X, PAULIS, ket_projector
from core.dynamics.trajectories import pulse_unitary
from core.exceptions import FidelityError
from core.noise.model import NoiseModel
from core.pulses.sequence import PulseSequence
from core.validators import is_hermitian, is_unitary, validate_qubit_operator

logger = logging.getLogger(__name__)

TargetLike = Union[str, np.ndarray]


def target_unitary(target: TargetLike) -> np.ndarray:
    """Resolve a target label ("memory" or "not") or explicit matrix to a unitary."""
    if isinstance(target, str):
        if target == Target.MEMORY:
            return PAULI_I.copy()
        if target == Target.NOT:
            return PAULI_X.copy()
        raise FidelityError(f"Unknown target {target!r}; expected '{Target.MEMORY}' or '{Target.NOT}'")
    U = validate_qubit_operator(target, "target")
    if not is_unitary(U):
        raise FidelityError("Target operator is not unitary within tolerance")
    return U


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > ALGEBRA_TOLERANCE:
        raise FidelityError(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


def state_fidelity(rho_f: np.ndarray, rho: np.ndarray) -> float:
    """
    Overlap tr(rho_f^dagger rho) between a desired and an actual state.

    Raises:
        FidelityError: If either operand is not Hermitian
    """
    rho_f = validate_qubit_operator(rho_f, "rho_f")
    rho = validate_qubit_operator(rho, "rho")
    if not (is_hermitian(rho_f) and is_hermitian(rho)):
        raise FidelityError("State fidelity requires Hermitian operands")
    return _real(np.trace(rho_f.conj().T @ rho), "State overlap")


def gate_fidelity(U_f: np.ndarray, evolved: Sequence[np.ndarray]) -> float:
    """
    Pure-state-averaged gate fidelity from the evolved Pauli operators.

    Phi = 1/2 + (1/12) sum_k tr(U_f sigma_k U_f^dagger E(sigma_k)) for k = x, y, z.

    Args:
        U_f: Target unitary
        evolved: E(sigma_x), E(sigma_y), E(sigma_z)

    Raises:
        FidelityError: If U_f is not unitary or three operators are not supplied
    """
    U_f = validate_qubit_operator(U_f, "U_f")
    if not is_unitary(U_f):
        raise FidelityError("Target operator is not unitary within tolerance")
    if len(evolved) != 3:
        raise FidelityError(f"Expected three evolved Pauli operators, got {len(evolved)}")
    total = sum(
        np.trace(U_f @ sigma @ U_f.conj().T @ validate_qubit_operator(E, "evolved operator"))
        for sigma, E in zip(PAULIS, evolved)
    )
    return 0.5 + _real(total, "Gate fidelity trace") / 12.0


def noisy_gate_fidelity(model: NoiseModel, pulse: PulseSequence, target: TargetLike) -> float:
    """Gate fidelity of the noise-averaged evolution against a target."""
    return gate_fidelity(target_unitary(target), evolve_operator_basis(model, pulse))


def memory_fidelity(model: NoiseModel, pulse: PulseSequence) -> float:
    """Gate fidelity against the identity (quantum memory)."""
    return noisy_gate_fidelity(model, pulse, Target.MEMORY)


def not_fidelity(model: NoiseModel, pulse: PulseSequence) -> float:
    """Gate fidelity against sigma_x (NOT gate)."""
    return noisy_gate_fidelity(model, pulse, Target.NOT)


def unitary_gate_fidelity(target: TargetLike, U: np.ndarray) -> float:
    """Closed-system gate fidelity (|tr(U_f^dagger U)|^2 + 2) / 6."""
    U_f = target_unitary(target)
    U = validate_qubit_operator(U, "U")
    return (abs(np.trace(U_f.conj().T @ U)) ** 2 + 2.0) / 6.0


def static_bias_state_fidelity(
    pulse: PulseSequence,
    delta: float,
    initial: Optional[np.ndarray] = None,
    target: TargetLike = Target.MEMORY,
) -> float:
    """
    State fidelity when the noise is frozen at a static bias delta.

    The initial state defaults to |0><0|; the desired final state is
    U_f rho U_f^dagger for the target unitary U_f.
    """
    rho = ket_projector(0) if initial is None else validate_qubit_operator(initial, "initial")
    U = pulse_unitary(pulse, delta)
    U_f = target_unitary(target)
    return state_fidelity(U_f @ rho @ U_f.conj().T, U @ rho @ U.conj().T)


@dataclass
class FidelityReport:
    """Scored evolution with descriptors of the pulse and noise that produced it."""

    value: float
    target: str
    pulse: str
    noise: str
    duration: float

    def __post_init__(self):
        if not -FIDELITY_TOLERANCE <= self.value <= 1.0 + FIDELITY_TOLERANCE:
            raise FidelityError(f"Fidelity {self.value} outside [0, 1]")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "FidelityReport":
        return cls(
            value=float(data["value"]),
            target=data.get("target", ""),
            pulse=data.get("pulse", ""),
            noise=data.get("noise", ""),
            duration=float(data.get("duration", 0.0)),
        )


def gate_fidelity_report(model: NoiseModel, pulse: PulseSequence, target: str) -> FidelityReport:
    """Evaluate the gate fidelity and package it with descriptors."""
    value = noisy_gate_fidelity(model, pulse, target)
    return FidelityReport(
        value=value,
        target=target,
        pulse=pulse.label,
        noise=model.describe(),
        duration=pulse.duration,
    )
