"""
Quotient dimension subcommands: ideal-dim, def-dim.
"""

import argparse

from services.species_engine.commands.base import BaseCommand, CommandResult
from services.species_engine.logic.ideals import def_space_dims, quotient_dim
from services.species_engine.persistence.codec import Problem


class IdealDimCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "ideal-dim"

    @property
    def help(self) -> str:
        return "Truncated dimensions of F_S(M)/R(P) or F_S(M)/J(P)"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--ideal", choices=["R", "J"], default="R")
        parser.add_argument(
            "--exclude-vertex",
            type=int,
            default=None,
            help="Count only the corner (1 - e_k) . (1 - e_k)",
        )

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        dims = quotient_dim(
            problem.bimodule,
            problem.potential_or_zero(),
            args.ideal,
            problem.truncation(args.degree),
            args.exclude_vertex,
        )
        data = {
            "ideal": dims.ideal,
            "per_degree_dims": dims.per_degree,
            "total": dims.total,
            "stabilized": dims.stabilized,
        }
        if dims.exclude_vertex is not None:
            data["exclude_vertex"] = dims.exclude_vertex
        return CommandResult(data=data, meta={"degree": dims.degree})


class DefDimCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "def-dim"

    @property
    def help(self) -> str:
        return "Truncated dimensions of the deformation space Def(M, P)"

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        dims = def_space_dims(
            problem.bimodule,
            problem.potential_or_zero(),
            problem.truncation(args.degree),
        )
        return CommandResult(
            data={"per_degree_dims": dims.per_degree, "total": dims.total},
            meta={"degree": dims.degree},
        )
