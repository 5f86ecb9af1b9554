"""
reduce: split a potential into trivial and reduced parts.
"""

import argparse

from services.species_engine.commands.base import BaseCommand, CommandResult
from services.species_engine.logic.cyclic import cyclic_normal_form
from services.species_engine.logic.reduction import classify_quadratic, split
from services.species_engine.persistence.codec import (
    Problem,
    bimodule_payload,
    generator_map_payload,
    series_payload,
)


class ReduceCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "reduce"

    @property
    def help(self) -> str:
        return "Split P into a trivial part and a reduced part"

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        P = problem.potential_or_zero()
        result = split(P, problem.truncation(args.degree), args.seed)
        classes = classify_quadratic(P, args.seed)
        data = {
            "quadratic": {
                "trivial": classes.trivial,
                "two_maximal": classes.maximal,
                "decomposable": classes.decomposable,
                **classes.diagnostics,
            },
            "trivial_pairs": [list(pair) for pair in result.trivial_pairs],
            "removed": result.removed,
            "trivial_potential": series_payload(result.trivial),
            "reduced_potential": series_payload(cyclic_normal_form(result.reduced)),
            "reduced_bimodule": bimodule_payload(result.reduced_bimodule),
            "automorphism": generator_map_payload(result.automorphism),
        }
        meta = {"degree": P.degree, "rounds": result.rounds}
        if args.trace:
            meta["trace"] = [generator_map_payload(phi) for phi in result.trace]
        return CommandResult(
            data=data, message=f"removed {len(result.removed)} generators", meta=meta
        )
