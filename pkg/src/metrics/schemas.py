from datetime import datetime

from pydantic import BaseModel, Field

from src.core.compat import UTC, StrEnum
from src.core.config import settings


class RunStatus(StrEnum):
    PENDING = "pending"
    COMPLETED = "completed"
    FAILED = "failed"


class RunMetrics(BaseModel):
    """Timing and outcome of one command-line run.

    Kept apart from the result summary so that summaries stay byte-identical
    between runs of the same config.

    Attributes:
        command: Subcommand that was run
        version: Application version that produced the run
        start_time: When the run started (UTC)
        end_time: When the run ended (UTC)
        processing_time: Wall-clock duration in seconds
        status: pending, completed or failed
        error_message: Error detail of a failed run
    """

    command: str
    version: str = settings.APP_VERSION
    start_time: datetime = Field(default_factory=lambda: datetime.now(UTC))
    end_time: datetime | None = None
    processing_time: float | None = None
    status: RunStatus = RunStatus.PENDING
    error_message: str | None = None
