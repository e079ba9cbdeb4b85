"""Open-system qubit dynamics under Markov noise: master equations and trajectories."""

from core.dynamics.master import (
    ConditionalState,
    MasterEquationPropagator,
    conditional_hamiltonian,
    evolve_operator_basis,
    get_propagator,
    propagate_master,
    time_series_frame,
    write_time_series_csv,
)
from core.dynamics.operators import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PAULIS,
    from_bloch,
    ket_projector,
    pauli_axis_states,
    to_bloch,
    trace_distance,
)
from core.dynamics.trajectories import (
    MonteCarloEstimate,
    monte_carlo_average,
    propagate_trajectory,
    pulse_unitary,
    segment_unitary,
    trajectory_unitary,
)

__all__ = [
    "ConditionalState",
    "MasterEquationPropagator",
    "MonteCarloEstimate",
    "PAULIS",
    "PAULI_I",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "conditional_hamiltonian",
    "evolve_operator_basis",
    "from_bloch",
    "get_propagator",
    "ket_projector",
    "monte_carlo_average",
    "pauli_axis_states",
    "propagate_master",
    "propagate_trajectory",
    "pulse_unitary",
    "segment_unitary",
    "time_series_frame",
    "to_bloch",
    "trace_distance",
    "trajectory_unitary",
    "write_time_series_csv",
]
