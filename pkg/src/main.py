import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from src.cli.parser import format_validation_error, parse_config
from src.cli.report import ReportWriter
from src.cli.schemas import Command, RunSpec
from src.cli.service import RunService
from src.core.config import settings
from src.core.exceptions import ComputationError, ConfigValidationError, NestedQaeError
from src.core.logging import setup_logging
from src.metrics.service import MetricsService

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.main",
        description=f"{settings.APP_NAME}: nested amplitude-estimation Monte Carlo on a desk",
    )
    parser.add_argument("--version", action="version", version=settings.APP_VERSION)
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    for command in Command:
        sub = subparsers.add_parser(command.value)
        sub.add_argument("--config", type=Path, help="JSON run config; unset sections take defaults")
        sub.add_argument("--out", type=Path, help="Directory for report, summary and metadata")
        sub.add_argument(
            "--seed",
            type=lambda text: int(text, 0),
            help="PRN stream seed x0 (decimal or 0x-hex)",
        )
        sub.add_argument("--shots", type=int, help="Outer-estimation shots to sample")
        sub.add_argument(
            "--quantize",
            action="store_true",
            help="Round inverse-CDF intermediates to n_dig fraction bits",
        )
    return parser


def load_spec(args: argparse.Namespace) -> RunSpec:
    overrides = {}
    if args.seed is not None:
        overrides["pcg.seed"] = args.seed
    if args.shots is not None:
        overrides["shots"] = args.shots
    if args.quantize:
        overrides["fixed_point.quantize"] = True
    if args.out is not None:
        overrides["output_dir"] = str(args.out)

    text, base_dir = "", None
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigValidationError(detail=f"Cannot read config {args.config}: {e}") from e
        base_dir = args.config.parent
    return parse_config(text, command=args.command, base_dir=base_dir, overrides=overrides)


def execute(spec: RunSpec) -> None:
    """Run one command and write report.tsv, summary.json, tables and metadata.json."""
    writer = ReportWriter(spec.output_dir)
    service = RunService(spec)
    with MetricsService(spec.output_dir).track(spec.command.value):
        result = service.run()
        writer.write_report(result.lines)
        writer.write_summary(
            {
                "command": spec.command.value,
                "config": spec.summary_config(),
                "results": result.results,
            }
        )
        for filename, table in result.tables.items():
            writer.write_table(filename, table)
        service.check_outcome(result)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        spec = load_spec(args)
        execute(spec)
    except NestedQaeError as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        print(e.detail, file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        detail = format_validation_error(e)
        logger.error(f"Invalid input: {detail}")
        print(detail, file=sys.stderr)
        return ConfigValidationError.exit_code
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        print(str(e), file=sys.stderr)
        return ComputationError.exit_code
    logger.info(f"Results written to {spec.output_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
