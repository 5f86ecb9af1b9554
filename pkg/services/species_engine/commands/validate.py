"""
validate: check a problem file and describe its species and bimodule.
"""

import argparse

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.commands.base import BaseCommand, CommandResult
from services.species_engine.logic.exchange import exchange_matrix
from services.species_engine.persistence.codec import (
    Problem,
    bimodule_payload,
    series_payload,
)


class ValidateCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "validate"

    @property
    def help(self) -> str:
        return "Validate a problem file and report block dimensions"

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        M = problem.bimodule
        P = problem.potential
        if P is not None and not P.is_cyclic():
            raise ValidationError(
                ErrorCodes.NON_CYCLIC, "potential must be cyclic", path="potential"
            )
        data = {
            "vertices": M.species.n,
            "algebra_dims": list(M.species.dims),
            "bimodule": bimodule_payload(M),
            "loops": M.has_loops,
            "two_cycles": [list(pair) for pair in M.two_cycle_pairs()],
            "two_acyclic": M.is_two_acyclic,
            "exchange_matrix": exchange_matrix(M).to_list(),
        }
        if P is not None:
            data["potential"] = series_payload(P)
        return CommandResult(data=data, message="problem file is valid")
