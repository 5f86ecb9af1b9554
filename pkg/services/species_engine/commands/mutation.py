"""
Mutation subcommands: mutate, involution-check, seed-potential.
"""

import argparse

from services.species_engine.commands.base import BaseCommand, CommandResult
from services.species_engine.logic.cyclic import cyclic_normal_form
from services.species_engine.logic.exchange import exchange_matrix, fz_mutate
from services.species_engine.logic.mutation import (
    matrix_coherent,
    mutate,
    premutate,
    try_mutate,
)
from services.species_engine.logic.seeds import seed_potential
from services.species_engine.persistence.codec import (
    Problem,
    bimodule_payload,
    generator_map_payload,
    problem_payload,
    series_payload,
)
from services.species_engine.pipeline.involution import double_mutation_compare


def _add_vertex(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, required=True, help="Vertex to mutate at")


class MutateCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "mutate"

    @property
    def help(self) -> str:
        return "Premutation mu_k or reduced mutation mu-bar_k at a vertex"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        _add_vertex(parser)
        parser.add_argument(
            "--premutate-only",
            action="store_true",
            help="Stop after mu_k; do not split",
        )

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        M, P = problem.bimodule, problem.potential_or_zero()
        N = problem.truncation(args.degree)
        if args.premutate_only:
            pre = premutate(M, P, args.k, N)
            return CommandResult(
                data={
                    "vertex": args.k,
                    "bimodule": bimodule_payload(pre.bimodule),
                    "potential": series_payload(pre.potential),
                },
                message=f"premutated at vertex {args.k}",
                meta={"degree": N},
            )

        outcome = mutate(M, P, args.k, N, args.seed)
        reduced = cyclic_normal_form(outcome.potential)
        data = {
            "vertex": args.k,
            "premutated_bimodule": bimodule_payload(outcome.premutated_bimodule),
            "premutated_potential": series_payload(outcome.premutated_potential),
            "trivial_pairs": [list(pair) for pair in outcome.split.trivial_pairs],
            "removed": outcome.split.removed,
            "bimodule": bimodule_payload(outcome.bimodule),
            "potential": series_payload(reduced),
            "exchange_matrix": exchange_matrix(outcome.bimodule).to_list(),
            "fz_mutated": fz_mutate(exchange_matrix(M), args.k).to_list(),
            "matrix_coherent": matrix_coherent(M, outcome),
            "problem": problem_payload(outcome.bimodule, reduced, N),
        }
        meta = {"degree": N, "rounds": outcome.split.rounds}
        if args.trace:
            meta["trace"] = [generator_map_payload(phi) for phi in outcome.split.trace]
        return CommandResult(
            data=data, message=f"mutated at vertex {args.k}", meta=meta
        )


class InvolutionCheckCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "involution-check"

    @property
    def help(self) -> str:
        return "Compare mu-bar_k mu-bar_k (M, P) with (M, P)"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        _add_vertex(parser)

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        M, P = problem.bimodule, problem.potential_or_zero()
        report = double_mutation_compare(
            M, P, args.k, problem.truncation(args.degree), args.seed
        )
        data = {
            "vertex": report.vertex,
            "identification": report.identification,
            "identification_complete": report.identification_complete,
            "original": vars(report.original),
            "mutated_twice": vars(report.mutated_twice),
            "matches": report.matches,
            "invariants_match": report.invariants_match,
            "certificate": report.certificate,
            "double_premutation": report.double_premutation,
            "bimodule": bimodule_payload(report.bimodule),
            "potential": series_payload(cyclic_normal_form(report.potential)),
        }
        meta = {"degree": report.degree}
        if args.trace:
            meta["trace"] = [generator_map_payload(phi) for phi in report.trace]
        message = "invariants match" if report.invariants_match else "invariants differ"
        return CommandResult(data=data, message=message, meta=meta)


class SeedPotentialCommand(BaseCommand):
    @property
    def name(self) -> str:
        return "seed-potential"

    @property
    def help(self) -> str:
        return "A reduced potential whose mutation at k is defined"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        _add_vertex(parser)

    def run(self, problem: Problem, args: argparse.Namespace) -> CommandResult:
        M = problem.bimodule
        N = problem.truncation(args.degree)
        P = seed_potential(M, args.k, max(N, 3))
        outcome = try_mutate(M, P, args.k, seed=args.seed)
        return CommandResult(
            data={
                "vertex": args.k,
                "potential": series_payload(P),
                "mutation": {
                    "status": outcome.status.value,
                    "reason": outcome.reason,
                },
                "problem": problem_payload(M, P, None),
            },
            meta={"degree": P.degree},
        )
