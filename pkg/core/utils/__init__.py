"""Utility functions for the workbench."""

from core.utils.cache.lru_cache import LRUCache
from core.utils.error.error_models import SweepPointFailure

__all__ = [
    "LRUCache",
    "SweepPointFailure",
]
