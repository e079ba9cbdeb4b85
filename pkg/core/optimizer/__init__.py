"""Gradient-based pulse optimization."""

from core.optimizer.gradient import FidelityObjective, fidelity_gradient
from core.optimizer.grape import ascend, optimize, start_seed
from core.optimizer.model import (
    OptimizationResult,
    OptimizerConfig,
    Termination,
    default_segment_count,
)

__all__ = [
    "FidelityObjective",
    "OptimizationResult",
    "OptimizerConfig",
    "Termination",
    "ascend",
    "default_segment_count",
    "fidelity_gradient",
    "optimize",
    "start_seed",
]
