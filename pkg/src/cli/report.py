import json
import logging
from src.core.compat import StrEnum
from pathlib import Path
from typing import Any, Sequence

from pydantic import BaseModel

from src.core.config import settings

REPORT_FILENAME = "report.tsv"
SUMMARY_FILENAME = "summary.json"


class LineTag(StrEnum):
    """REF lines carry figures comparable with published values, DIAG the rest."""

    REF = "[REF]"
    DIAG = "[DIAG]"


class ReportLine(BaseModel):
    tag: LineTag
    key: str
    value: Any
    note: str = ""


class TableData(BaseModel):
    header: list[str]
    rows: list[list[Any]]


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return "-"
    return str(value)


class ReportWriter:
    """Writes report.tsv, summary.json and plot-data tables into one directory."""

    def __init__(self, out_dir: Path | str, delimiter: str = settings.REPORT_DELIMITER):
        self.out_dir = Path(out_dir)
        self.delimiter = delimiter
        self.logger = logging.getLogger(__name__)

    def _write(self, filename: str, text: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / filename
        path.write_text(text, encoding="utf-8")
        self.logger.debug(f"Wrote {path}")
        return path

    def write_report(self, lines: Sequence[ReportLine]) -> Path:
        rows = [self.delimiter.join(("tag", "key", "value", "note"))]
        rows += [
            self.delimiter.join((line.tag.value, line.key, format_value(line.value), line.note))
            for line in lines
        ]
        return self._write(REPORT_FILENAME, "\n".join(rows) + "\n")

    def write_summary(self, summary: dict[str, Any]) -> Path:
        """Deterministic JSON: sorted keys, fixed indentation, no timestamps."""
        return self._write(SUMMARY_FILENAME, json.dumps(summary, sort_keys=True, indent=2) + "\n")

    def write_table(self, filename: str, table: TableData) -> Path:
        rows = [self.delimiter.join(table.header)]
        rows += [self.delimiter.join(format_value(cell) for cell in row) for row in table.rows]
        return self._write(filename, "\n".join(rows) + "\n")
