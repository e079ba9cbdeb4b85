"""Infrastructure utilities (experiment tracking)."""

from core.utils.infrastructure.mlflow import (
    is_mlflow_enabled,
    log_command_summary,
    mlflow_run,
    setup_mlflow_tracking,
)

__all__ = ["is_mlflow_enabled", "log_command_summary", "mlflow_run", "setup_mlflow_tracking"]
