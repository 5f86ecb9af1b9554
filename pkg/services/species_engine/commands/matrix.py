"""
matrix: exchange matrix B(M) and its Fomin-Zelevinsky mutations.
"""

import argparse

from services.species_engine.commands.base import BaseCommand, CommandResult
from services.species_engine.logic.exchange import (
    exchange_matrix,
    fz_mutate,
    species_from_matrix,
)
from services.species_engine.persistence.codec import Problem, bimodule_payload


class MatrixCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "matrix"

    @property
    def help(self) -> str:
        return "Exchange matrix of M, optionally mutated along vertices"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--mutate",
            type=int,
            action="append",
            default=[],
            metavar="K",
            help="Mutate at K (repeatable, applied in order)",
        )

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        B = exchange_matrix(problem.bimodule)
        chain = []
        for k in args.mutate:
            B = fz_mutate(B, k)
            chain.append({"vertex": k, "matrix": B.to_list()})
        data = {
            "exchange_matrix": exchange_matrix(problem.bimodule).to_list(),
            "symmetrizer": list(B.symmetrizer),
            "mutations": chain,
        }
        if chain:
            _, realized = species_from_matrix(B.matrix, problem.species.algebras)
            data["realized_bimodule"] = bimodule_payload(realized)
        return CommandResult(data=data)
