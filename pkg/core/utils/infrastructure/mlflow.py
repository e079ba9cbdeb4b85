"""Central MLflow setup for experiment tracking."""

import logging
from contextlib import contextmanager
from typing import Dict, Optional

import mlflow

from core.config import get_config

logger = logging.getLogger(__name__)


def setup_mlflow_tracking(experiment_name: Optional[str] = None) -> bool:
    """
    Point MLflow at the configured tracking URI and experiment.

    Args:
        experiment_name: Name of the MLflow experiment. If None, uses config default.

    Returns:
        True when tracking is enabled and configured, False otherwise
    """
    config = get_config()
    if not config.mlflow.enabled:
        return False

    if config.mlflow.tracking_uri:
        mlflow.set_tracking_uri(config.mlflow.tracking_uri)
    mlflow.set_experiment(experiment_name or config.mlflow.experiment_name)
    return True


@contextmanager
def mlflow_run(experiment_name: Optional[str] = None, run_name: Optional[str] = None):
    """
    Context manager grouping one CLI command under a single MLflow run.

    Yields True when a run is active, False when tracking is disabled.

    Example:
        >>> with mlflow_run(run_name="memory-sweep") as active:
        ...     frame = cmd_memory_sweep(config)
    """
    if not setup_mlflow_tracking(experiment_name):
        yield False
        return

    config = get_config()
    with mlflow.start_run(run_name=run_name or config.mlflow.run_name):
        yield True


def log_command_summary(params: Dict[str, object], metrics: Dict[str, float]) -> None:
    """Log parameters and scalar metrics to the active run, if any."""
    if not is_mlflow_enabled() or mlflow.active_run() is None:
        return
    mlflow.log_params({key: str(value) for key, value in params.items()})
    finite = {key: float(value) for key, value in metrics.items() if value == value}
    if finite:
        mlflow.log_metrics(finite)
    logger.debug(f"Logged {len(params)} params and {len(finite)} metrics to MLflow")


def is_mlflow_enabled() -> bool:
    """Check if MLflow tracking is enabled."""
    return get_config().mlflow.enabled
