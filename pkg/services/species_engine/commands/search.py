"""
search: randomized search for a potential surviving a mutation sequence.
"""

import argparse

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.commands.base import BaseCommand, CommandResult
from services.species_engine.core.config import parse_pool
from services.species_engine.persistence.codec import (
    Problem,
    problem_payload,
    series_payload,
)
from services.species_engine.pipeline.search import search_nondegenerate


def parse_sequence(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as e:
        raise ValidationError(
            ErrorCodes.INVALID_INPUT, f"invalid vertex sequence '{text}'", "seq"
        ) from e


class SearchCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "search"

    @property
    def help(self) -> str:
        return "Find a potential for which every mutation of --seq is defined"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--seq", default="", help="Vertices, e.g. 2,1,3")
        parser.add_argument("--trials", type=int, default=None)
        parser.add_argument("--pool", default=None, help='Coefficients, e.g. "-2..2"')
        parser.add_argument("--workers", type=int, default=None)

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        try:
            pool = None if args.pool is None else parse_pool(args.pool)
        except ValueError as e:
            raise ValidationError(ErrorCodes.INVALID_INPUT, str(e), "pool") from e
        N = problem.truncation(args.degree)
        result = search_nondegenerate(
            problem.bimodule,
            parse_sequence(args.seq),
            trials=args.trials,
            seed=args.seed,
            pool=pool,
            degree=N,
            workers=args.workers,
        )
        return CommandResult(
            data={
                "sequence": result.sequence,
                "trial": result.trial,
                "seed": result.seed,
                "potential": series_payload(result.potential),
                "matrices": result.matrices,
                "fz_coherent": result.fz_coherent,
                "statistics": result.statistics,
                "problem": problem_payload(problem.bimodule, result.potential, N),
            },
            message=f"witness found at trial {result.trial}",
            meta={"degree": N},
        )
