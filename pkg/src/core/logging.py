import logging

from src.core.config import settings


def setup_logging(level: str | None = None) -> None:
    """Configure root logging once for the command line process."""
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
    )
