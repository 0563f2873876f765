import logging
import time
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Iterator

from src.core.compat import UTC
from src.metrics.repository import MetricsRepository
from src.metrics.schemas import RunMetrics, RunStatus


class MetricsService:
    """Times command runs and persists the outcome next to the run's results."""

    def __init__(self, out_dir: Path | str):
        self.repository = MetricsRepository(out_dir)
        self.logger = logging.getLogger(__name__)

    @contextmanager
    def track(self, command: str) -> Iterator[RunMetrics]:
        """Measure the enclosed block and save its metrics even when it fails.

        Args:
            command: Name recorded in the metrics record

        Yields:
            RunMetrics: The pending record, finalized on exit
        """
        metrics = RunMetrics(command=command)
        started = time.perf_counter()
        try:
            yield metrics
        except Exception as e:
            metrics.status = RunStatus.FAILED
            metrics.error_message = getattr(e, "detail", str(e))
            raise
        else:
            metrics.status = RunStatus.COMPLETED
        finally:
            metrics.end_time = datetime.now(UTC)
            metrics.processing_time = round(time.perf_counter() - started, 6)
            self.logger.info(
                f"{command} {metrics.status.value} in {metrics.processing_time:.3f}s"
            )
            self.repository.save_metrics(metrics)

    def get_metrics(self) -> RunMetrics | None:
        return self.repository.get_metrics()
