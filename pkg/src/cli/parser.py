"""Config documents: JSON objects validated into a RunSpec."""
import json
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from src.cli.schemas import Command, RunSpec
from src.core.exceptions import ConfigValidationError


def format_validation_error(error: ValidationError) -> str:
    """One line per problem, each prefixed with its dotted key path."""
    lines = []
    for item in error.errors():
        path = ".".join(str(part) for part in item["loc"]) or "<document>"
        message = item["msg"].removeprefix("Value error, ")
        lines.append(f"{path}: {message}")
    return "; ".join(lines)


def load_document(text: str) -> dict[str, Any]:
    """Parse a config or summary document; blank text is an empty document.

    Raises:
        ConfigValidationError: If the text is not a JSON object
    """
    if not text.strip():
        return {}
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigValidationError(
            detail=f"Malformed config at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from e
    if not isinstance(document, dict):
        raise ConfigValidationError(
            detail=f"Config must be a JSON object, got {type(document).__name__}"
        )
    return document


def _resolve_paths(document: dict[str, Any], base_dir: Path) -> None:
    portfolio = document.get("portfolio")
    if isinstance(portfolio, dict) and isinstance(portfolio.get("path"), str):
        path = Path(portfolio["path"])
        if not path.is_absolute():
            portfolio["path"] = str(base_dir / path)


def parse_config(
    text: str,
    command: Command | str | None = None,
    base_dir: Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> RunSpec:
    """Validate a config document into a RunSpec.

    Args:
        text: JSON document; unset sections take their defaults
        command: Subcommand; overrides a ``command`` key in the document
        base_dir: Directory that relative portfolio paths are resolved against
        overrides: Dotted keys set after parsing, e.g. {"pcg.seed": 7}

    Returns:
        RunSpec: Fully validated run configuration

    Raises:
        ConfigValidationError: On malformed text, unknown keys, or violated preconditions
    """
    document = load_document(text)
    if command is not None:
        document["command"] = str(command)
    _resolve_paths(document, base_dir or Path.cwd())
    for dotted, value in (overrides or {}).items():
        *parents, leaf = dotted.split(".")
        node = document
        for key in parents:
            child = node.setdefault(key, {})
            if not isinstance(child, dict):
                raise ConfigValidationError(detail=f"{key}: expected a section, got {child!r}")
            node = child
        node[leaf] = value
    try:
        return RunSpec.model_validate(document)
    except ValidationError as e:
        raise ConfigValidationError(detail=format_validation_error(e)) from e
