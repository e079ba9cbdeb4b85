"""Error handling utilities."""

from core.utils.error.error_models import SweepPointFailure

__all__ = ["SweepPointFailure"]
