"""Base polynomial source for lattice runs."""
import enum
from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import datetime
from typing import Iterator, Optional

from core.logging_config import logger
from services.polynomial import IntPolynomial


class RunStatus(str, enum.Enum):
    """Run status enumeration."""
    RUNNING = "running"
    SUCCESS = "success"
    FAILED = "failed"


@dataclass
class SourceRun:
    """Bookkeeping for one pass over a source."""
    source_name: str
    status: RunStatus
    started_at: datetime
    completed_at: Optional[datetime] = None
    records_read: int = 0
    records_emitted: int = 0
    error_message: Optional[str] = None


class BaseSource(ABC):
    """Base class for all polynomial sources."""

    def __init__(self, source_name: str):
        """
        Initialize base source.

        Args:
            source_name: Name of the source
        """
        self.source_name = source_name
        self.current_run: Optional[SourceRun] = None

    def start_run(self) -> SourceRun:
        """
        Start a new run.

        Returns:
            SourceRun instance
        """
        self.current_run = SourceRun(
            source_name=self.source_name,
            status=RunStatus.RUNNING,
            started_at=datetime.utcnow(),
        )
        logger.info("Source run started", source=self.source_name)
        return self.current_run

    def complete_run(self, records_read: int = 0, records_emitted: int = 0):
        """
        Mark the run as successful.

        Args:
            records_read: Polynomials taken from the source
            records_emitted: Records written to the output
        """
        if self.current_run:
            self.current_run.status = RunStatus.SUCCESS
            self.current_run.completed_at = datetime.utcnow()
            self.current_run.records_read = records_read
            self.current_run.records_emitted = records_emitted
            logger.info(
                "Source run completed",
                source=self.source_name,
                read=records_read,
                emitted=records_emitted,
            )

    def fail_run(self, error_message: str):
        """
        Mark the run as failed.

        Args:
            error_message: Error message
        """
        if self.current_run:
            self.current_run.status = RunStatus.FAILED
            self.current_run.completed_at = datetime.utcnow()
            self.current_run.error_message = error_message
            logger.error("Source run failed", source=self.source_name, error=error_message)

    @abstractmethod
    def polynomials(self) -> Iterator[IntPolynomial]:
        """
        Yield polynomials in a deterministic order.

        Returns:
            Iterator over IntPolynomial
        """
        pass

    def size(self) -> Optional[int]:
        """Number of polynomials, when known in advance."""
        return None
