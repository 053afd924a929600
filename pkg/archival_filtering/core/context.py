# archival_filtering/core/context.py
# Revision No: 002
# Goals: Define ExperimentContext for tracking a bench run.

from typing import Dict, Any, List
from dataclasses import dataclass, field
from datetime import datetime
import asyncio
import logging

logger = logging.getLogger(__name__)


@dataclass
class ExperimentContext:
    """Tracks progress of one experiment-matrix run."""

    name: str
    expected_rows: int = 0
    start_time: datetime = field(default_factory=datetime.now)
    completed_rows: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    variables: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.logger = logging.getLogger(__name__)
        self._lock = asyncio.Lock()

    async def record_rows(self, count: int, errors: List[Dict[str, Any]]):
        """Account for a finished group of rows."""
        async with self._lock:
            self.completed_rows += count
            self.failures.extend(errors)
            self._log_event('rows', {'completed': self.completed_rows, 'expected': self.expected_rows,
                                     'new_failures': len(errors)})

    def set_variable(self, name: str, value: Any):
        self.variables[name] = value

    def _log_event(self, event_type: str, details: Dict[str, Any]):
        self.logger.debug(f"Bench event: {event_type} {details}")

    def get_execution_time(self) -> float:
        """Get total execution time in seconds."""
        return (datetime.now() - self.start_time).total_seconds()

    def summarize(self) -> Dict[str, Any]:
        """Summarize run state."""
        return {
            'name': self.name,
            'execution_time': self.get_execution_time(),
            'rows_completed': self.completed_rows,
            'rows_expected': self.expected_rows,
            'failures': len(self.failures),
            'variables': self.variables,
        }

# Dependencies: typing, dataclasses, datetime, asyncio, logging
# Required Actions: None
# CLI Commands: None
