"""
Species Potentials Engine CLI

Batch entry point: reads a JSON problem file (or stdin), runs one
subcommand and writes a JSON report envelope to stdout (or --out).

Exit codes: 0 success, 1 invalid input, 2 failed mathematical precondition.

Usage:
    python -m services.species_engine.main mutate --k 2 --in problems/three_cycle.json
"""

import argparse
import logging
import sys
from collections.abc import Sequence

from common.errors import ErrorCodes
from common.exceptions import (
    EngineException,
    InternalError,
    ValidationError,
    engine_exception_handler,
)
from common.schemas.responses import EngineResponse
from services.species_engine.commands.base import CommandResult
from services.species_engine.core.config import settings
from services.species_engine.core.registry import get_registry
from services.species_engine.persistence.codec import (
    STDIO,
    dump_model,
    load_problem,
    write_json,
)

logger = logging.getLogger(__name__)


class EngineArgumentParser(argparse.ArgumentParser):
    """Flag errors become invalid-input errors (exit 1) instead of SystemExit."""

    def error(self, message: str) -> None:
        raise ValidationError(ErrorCodes.INVALID_INPUT, message)


def configure_logging() -> None:
    # stdout carries only JSON
    logging.basicConfig(
        stream=sys.stderr,
        level=settings.LOG_LEVEL,
        format=settings.LOG_FORMAT,
        force=True,
    )


def build_parser() -> EngineArgumentParser:
    common = EngineArgumentParser(add_help=False)
    common.add_argument(
        "--in", dest="source", default=STDIO, help="Problem file (default stdin)"
    )
    common.add_argument("--out", default=None, help="Report file (default stdout)")
    common.add_argument("--degree", type=int, default=None, help="Truncation N")
    common.add_argument("--seed", type=int, default=None, help="Seed for choices")
    common.add_argument(
        "--trace",
        action="store_true",
        help="Add intermediate automorphisms to the report meta",
    )

    parser = EngineArgumentParser(
        prog="species-engine", description=settings.DESCRIPTION
    )
    parser.add_argument("--version", action="version", version=settings.VERSION)
    subparsers = parser.add_subparsers(dest="command", required=True)
    registry = get_registry()
    for name in registry.names():
        command = registry.get(name)
        sub = subparsers.add_parser(name, parents=[common], help=command.help)
        command.add_arguments(sub)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, dict, str | None]:
    """
    Parse flags, run the command and build the report envelope.

    Flow:
    1. Parse flags (errors exit 1)
    2. Load the problem file at the resolved truncation
    3. Run the command
    4. Wrap the result in the response envelope

    Returns:
        (exit code, JSON-ready envelope, --out target)
    """
    command_name = None
    out = None
    try:
        # 1. Flags
        args = build_parser().parse_args(argv)
        command_name, out = args.command, args.out
        if args.degree is not None and args.degree < 0:
            raise ValidationError(
                ErrorCodes.INVALID_INPUT, "--degree must be >= 0", "degree"
            )

        # 2. Problem
        problem = load_problem(args.source, args.degree)

        # 3. Command
        command = get_registry().get(command_name)
        logger.info(f"Running {command_name} on {args.source}")
        result: CommandResult = command.run(problem, args)

        # 4. Envelope
        meta = {"version": settings.VERSION, **result.meta}
        response = EngineResponse(
            success=True,
            command=command_name,
            message=result.message,
            data=result.data,
            meta=meta,
        )
        return 0, dump_model(response), out

    except EngineException as exc:
        logger.warning(f"{exc.code}: {exc.message}")
        code, payload = engine_exception_handler(exc, command_name)
        return code, dump_model(payload), out
    except Exception as exc:
        logger.exception(f"Unexpected failure in {command_name}")
        code, payload = engine_exception_handler(InternalError(str(exc)), command_name)
        return code, dump_model(payload), out


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    code, payload, out = run(argv)
    write_json(payload, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
