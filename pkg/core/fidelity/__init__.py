"""Fidelity measures for quantum memory and gate operations."""

from core.fidelity.metrics import (
    FidelityReport,
    gate_fidelity,
    gate_fidelity_report,
    memory_fidelity,
    noisy_gate_fidelity,
    not_fidelity,
    state_fidelity,
    static_bias_state_fidelity,
    target_unitary,
    unitary_gate_fidelity,
)

__all__ = [
    "FidelityReport",
    "gate_fidelity",
    "gate_fidelity_report",
    "memory_fidelity",
    "noisy_gate_fidelity",
    "not_fidelity",
    "state_fidelity",
    "static_bias_state_fidelity",
    "target_unitary",
    "unitary_gate_fidelity",
]
