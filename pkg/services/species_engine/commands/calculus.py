"""
Cyclic calculus subcommands: delta, xgen, xmap.
"""

import argparse

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.commands.base import BaseCommand, CommandResult
from services.species_engine.logic.calculus import (
    Functional,
    delta,
    functional_sum,
    x_gen,
    x_map,
)
from services.species_engine.persistence.codec import Problem, series_payload


class DeltaCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "delta"

    @property
    def help(self) -> str:
        return "Cyclic derivative delta(P)"

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        P = problem.potential_or_zero()
        return CommandResult(data={"delta": series_payload(delta(P))})


class XGenCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "xgen"

    @property
    def help(self) -> str:
        return "X_{a*}(P) for one generator, or for all of them"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--arrow", action="append", help="Generator a (repeatable; default all)"
        )

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        P = problem.potential_or_zero()
        M = problem.bimodule
        arrows = args.arrow or list(M.names)
        for a in arrows:
            if a not in M:
                raise ValidationError(
                    ErrorCodes.UNKNOWN_GENERATOR, f"unknown generator '{a}'", "arrow"
                )
        derivative = delta(P)
        return CommandResult(
            data={
                "xgen": {a: series_payload(x_gen(P, a, derivative)) for a in arrows}
            }
        )


class XMapCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "xmap"

    @property
    def help(self) -> str:
        return "X^P(psi) for psi a sum of dual functionals (s a)*"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--arrow", action="append", required=True, help="Generator a (repeatable)"
        )
        parser.add_argument(
            "--label",
            action="append",
            help="Basis label s at sigma(a), one per --arrow (default the unit)",
        )

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        P = problem.potential_or_zero()
        M = problem.bimodule
        labels = args.label or [None] * len(args.arrow)
        if len(labels) != len(args.arrow):
            raise ValidationError(
                ErrorCodes.INVALID_INPUT, "give one --label per --arrow", "label"
            )
        for a in args.arrow:
            if a not in M:
                raise ValidationError(
                    ErrorCodes.UNKNOWN_GENERATOR, f"unknown generator '{a}'", "arrow"
                )
        psi = functional_sum(
            (Functional.dual(M, a, s) for a, s in zip(args.arrow, labels, strict=True)),
            M,
        )
        return CommandResult(
            data={
                "functional": [
                    {"arrow": a, "label": s or M.species.unit(M.generator(a).sigma)}
                    for a, s in zip(args.arrow, labels, strict=True)
                ],
                "xmap": series_payload(x_map(P, psi)),
            }
        )
