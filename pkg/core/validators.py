"""Validation utilities shared by the noise, pulse and dynamics modules."""

from typing import Type

import numpy as np

from core.constants import ALGEBRA_TOLERANCE, GENERATOR_TOLERANCE
from core.exceptions import DynamicsError, NoiseModelError, WorkbenchError


def generator_scale(gamma: np.ndarray) -> float:
    """Magnitude used to turn absolute generator tolerances into relative ones."""
    return max(1.0, float(np.max(np.abs(gamma)))) if gamma.size else 1.0


def validate_positive(name: str, value: float, error: Type[WorkbenchError] = NoiseModelError) -> None:
    """
    Validate that a scalar is finite and strictly positive.

    Raises:
        error: If the value is non-finite or not positive
    """
    if not np.isfinite(value) or value <= 0:
        raise error(f"{name} must be a positive finite number, got {value!r}")


def validate_generator(gamma: np.ndarray, tol: float = GENERATOR_TOLERANCE) -> None:
    """
    Validate a symmetric Markov generator.

    Checks squareness, finiteness, symmetry, zero column sums and non-negative
    off-diagonal rates. Tolerances scale with the largest rate.

    Raises:
        NoiseModelError: If any generator invariant is violated
    """
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1] or gamma.shape[0] < 1:
        raise NoiseModelError(f"Generator must be a non-empty square matrix, got shape {gamma.shape}")
    if not np.all(np.isfinite(gamma)):
        raise NoiseModelError("Generator contains non-finite entries")

    atol = tol * generator_scale(gamma)

    asymmetry = float(np.max(np.abs(gamma - gamma.T)))
    if asymmetry > atol:
        raise NoiseModelError(f"Generator is not symmetric (max |G - G^T| = {asymmetry:.3e})")

    column_sums = np.abs(gamma.sum(axis=0))
    if float(np.max(column_sums)) > atol:
        raise NoiseModelError(
            f"Generator columns must sum to zero (max |sum| = {float(np.max(column_sums)):.3e})"
        )

    off_diagonal = gamma[~np.eye(gamma.shape[0], dtype=bool)]
    if off_diagonal.size and float(np.min(off_diagonal)) < -atol:
        raise NoiseModelError(
            f"Generator has negative off-diagonal rate {float(np.min(off_diagonal)):.3e}"
        )


def validate_amplitudes(b: np.ndarray, size: int, tol: float = GENERATOR_TOLERANCE) -> None:
    """
    Validate per-state noise amplitudes: correct length, finite, unbiased.

    Raises:
        NoiseModelError: If amplitudes do not match the state count or do not sum to zero
    """
    if b.ndim != 1 or b.shape[0] != size:
        raise NoiseModelError(f"Amplitude vector must have length {size}, got shape {b.shape}")
    if not np.all(np.isfinite(b)):
        raise NoiseModelError("Amplitude vector contains non-finite entries")
    scale = max(1.0, float(np.max(np.abs(b)))) if b.size else 1.0
    bias = abs(float(b.sum()))
    if bias > tol * scale * max(1, size):
        raise NoiseModelError(f"Noise amplitudes must sum to zero (sum = {bias:.3e})")


def validate_qubit_operator(op: np.ndarray, name: str = "operator") -> np.ndarray:
    """
    Validate that an object is a finite 2x2 matrix and return it as complex.

    Raises:
        DynamicsError: If the shape is wrong or entries are non-finite
    """
    arr = np.asarray(op, dtype=complex)
    if arr.shape != (2, 2):
        raise DynamicsError(f"{name} must be a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DynamicsError(f"{name} contains non-finite entries")
    return arr


def is_hermitian(op: np.ndarray, tol: float = ALGEBRA_TOLERANCE) -> bool:
    """Check Hermiticity within an absolute tolerance."""
    return bool(np.max(np.abs(op - op.conj().T)) <= tol)


def is_unitary(op: np.ndarray, tol: float = ALGEBRA_TOLERANCE) -> bool:
    """Check unitarity within an absolute tolerance."""
    return bool(np.max(np.abs(op @ op.conj().T - np.eye(op.shape[0]))) <= tol)
