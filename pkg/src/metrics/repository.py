import logging
from pathlib import Path

from src.metrics.schemas import RunMetrics

METADATA_FILENAME = "metadata.json"


class MetricsRepository:
    """Stores run metrics as ``metadata.json`` in the run's output directory."""

    def __init__(self, out_dir: Path | str):
        self.path = Path(out_dir) / METADATA_FILENAME
        self.logger = logging.getLogger(__name__)

    def save_metrics(self, metrics: RunMetrics) -> RunMetrics:
        """Write the metrics record, replacing any earlier one.

        Raises:
            OSError: If the output directory cannot be written
        """
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(metrics.model_dump_json(indent=2) + "\n", encoding="utf-8")
        except OSError as e:
            self.logger.error(f"Error saving metrics: {e}")
            raise
        return metrics

    def get_metrics(self) -> RunMetrics | None:
        if not self.path.is_file():
            return None
        return RunMetrics.model_validate_json(self.path.read_text(encoding="utf-8"))
