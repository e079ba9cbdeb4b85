"""Error models for sweep processing."""

from dataclasses import dataclass
from typing import Any, Optional


@dataclass
class SweepPointFailure:
    """Standardized record of a grid point that failed during a sweep."""

    command: str
    index: int
    parameter: Any
    error: str
    error_type: str
    column: Optional[str] = None

    @classmethod
    def from_exception(
        cls, command: str, index: int, parameter: Any, exc: BaseException, column: Optional[str] = None
    ) -> 'SweepPointFailure':
        """Build a failure record from a caught exception."""
        return cls(
            command=command,
            index=index,
            parameter=parameter,
            error=str(exc),
            error_type=type(exc).__name__,
            column=column,
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON reports."""
        result = {
            'command': self.command,
            'index': self.index,
            'parameter': self.parameter,
            'error': self.error,
            'error_type': self.error_type,
        }
        if self.column:
            result['column'] = self.column
        return result

    @classmethod
    def from_dict(cls, data: dict) -> 'SweepPointFailure':
        """Create from dictionary."""
        return cls(
            command=data.get('command', ''),
            index=int(data.get('index', -1)),
            parameter=data.get('parameter'),
            error=data.get('error', str(data)),
            error_type=data.get('error_type', 'UNKNOWN'),
            column=data.get('column'),
        )

    def __str__(self) -> str:
        where = f"{self.command}[{self.index}] ({self.parameter!r})"
        if self.column:
            where += f" column {self.column}"
        return f"{where}: {self.error_type}: {self.error}"
