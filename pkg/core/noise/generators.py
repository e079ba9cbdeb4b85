"""Assembly of symmetric Markov generators and amplitude vectors."""

import logging
import math
from typing import Sequence, Tuple

import numpy as np
from scipy.linalg import hadamard

from core.constants import GENERATOR_TOLERANCE
from core.exceptions import NoiseModelError
from core.validators import generator_scale

logger = logging.getLogger(__name__)


def hadamard_basis(m: int) -> np.ndarray:
    """Orthogonal m-fold tensor power of the normalized 2x2 Hadamard matrix."""
    size = 2 ** m
    # Sylvester ordering coincides with the Kronecker power H^{(x)m}
    return hadamard(size).astype(float) / math.sqrt(size)


def level_exponent(size: int) -> int:
    """Return m with size = 2^m, or raise if size is not a power of two."""
    m = int(round(math.log2(size))) if size > 0 else -1
    if m < 0 or 2 ** m != size:
        raise NoiseModelError(f"State count {size} is not a power of two")
    return m


def hadamard_generator(rates: Sequence[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Build Gamma = V diag(lambda) V^T from the switching-rate grid.

    The eigenvalues are -2 * (0, rates...) in descending order and V is the
    Hadamard basis, so the uniform vector spans the zero eigenspace.

    Args:
        rates: The M-1 switching rates gamma_k (ascending)

    Returns:
        Tuple of (gamma, V, eigenvalues)
    """
    rates = np.asarray(rates, dtype=float)
    m = level_exponent(rates.size + 1)
    V = hadamard_basis(m)
    eigenvalues = -2.0 * np.concatenate(([0.0], rates))
    gamma = (V * eigenvalues) @ V.T
    return enforce_conservation(gamma), V, eigenvalues


def two_state_generator(rate: float) -> np.ndarray:
    """Symmetric two-state generator switching at the given rate."""
    return rate * np.array([[-1.0, 1.0], [1.0, -1.0]])


def kronecker_sum_generator(rates: Sequence[float]) -> np.ndarray:
    """
    Generator of K independent symmetric telegraph processes.

    State s encodes fluctuator k in bit k (least significant bit = fluctuator 0).
    """
    rates = list(rates)
    size = 2 ** len(rates)
    gamma = np.zeros((size, size))
    for k, rate in enumerate(rates):
        high = np.eye(2 ** (len(rates) - 1 - k))
        low = np.eye(2 ** k)
        gamma += np.kron(high, np.kron(two_state_generator(rate), low))
    return gamma


def sign_enumeration(deltas: Sequence[float]) -> np.ndarray:
    """Amplitude of every product state: bit k clear -> +Delta_k, set -> -Delta_k."""
    deltas = np.asarray(deltas, dtype=float)
    states = np.arange(2 ** deltas.size)
    bits = (states[:, None] >> np.arange(deltas.size)[None, :]) & 1
    return ((1 - 2 * bits) * deltas[None, :]).sum(axis=1)


def enforce_conservation(gamma: np.ndarray, tol: float = GENERATOR_TOLERANCE) -> np.ndarray:
    """
    Symmetrize, clip round-off negatives and rebuild the diagonal.

    Off-diagonal entries in (-tol*scale, 0) are set to zero; larger negatives are
    left in place for validation to reject. The diagonal is recomputed so that
    every column sums to zero.
    """
    gamma = 0.5 * (gamma + gamma.T)
    atol = tol * generator_scale(gamma)
    off_diagonal = gamma.copy()
    np.fill_diagonal(off_diagonal, 0.0)
    roundoff = (off_diagonal < 0) & (off_diagonal > -atol)
    if roundoff.any():
        logger.debug(f"Clipping {int(roundoff.sum())} round-off negative rates to zero")
        off_diagonal[roundoff] = 0.0
    np.fill_diagonal(off_diagonal, -off_diagonal.sum(axis=0))
    return off_diagonal
