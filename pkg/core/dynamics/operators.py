"""Single-qubit operators and Bloch-coordinate helpers."""

from typing import Tuple

import numpy as np

from core.validators import validate_qubit_operator

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# (I, X, Y, Z): coordinate c of a Bloch 4-vector pairs with _BASIS[c]
_BASIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)
PAULIS = _BASIS[1:]

for _op in _BASIS:
    _op.setflags(write=False)


def ket_projector(bit: int) -> np.ndarray:
    """|bit><bit| for bit in {0, 1} (sigma_z eigenstates +1 and -1)."""
    projector = np.zeros((2, 2), dtype=complex)
    projector[bit, bit] = 1.0
    return projector


def to_bloch(op: np.ndarray) -> np.ndarray:
    """
    Real coordinates (r0, rx, ry, rz) of a Hermitian 2x2 operator.

    r0 = tr(op) and r_i = tr(op sigma_i), so op = (r0 I + r . sigma) / 2.
    """
    op = validate_qubit_operator(op)
    return np.array([np.trace(op @ p).real for p in _BASIS])


def from_bloch(r: np.ndarray) -> np.ndarray:
    """Inverse of to_bloch."""
    r0, rx, ry, rz = np.asarray(r, dtype=float)
    return 0.5 * (r0 * PAULI_I + rx * PAULI_X + ry * PAULI_Y + rz * PAULI_Z)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(1/2) || rho - sigma ||_1 for Hermitian operands."""
    difference = validate_qubit_operator(rho, "rho") - validate_qubit_operator(sigma, "sigma")
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(difference))))


def pauli_axis_states() -> Tuple[np.ndarray, ...]:
    """The six pure states (I +- sigma_k)/2 for k = x, y, z."""
    return tuple(0.5 * (PAULI_I + sign * p) for p in PAULIS for sign in (1.0, -1.0))


def random_hermitian(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random Hermitian 2x2 operator with Gaussian Bloch coordinates."""
    return from_bloch(scale * rng.standard_normal(4))


def random_pure_state(rng: np.random.Generator) -> np.ndarray:
    """Random pure state, uniform on the Bloch sphere."""
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    return from_bloch(np.concatenate(([1.0], direction)))
