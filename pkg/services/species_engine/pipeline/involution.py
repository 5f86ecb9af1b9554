"""
Double Mutation Check

Mutates twice at the same vertex and compares the result with the input:
1. Reduced mutation mu-bar_k, twice
2. Generator identification of the twice-mutated bimodule with M
3. Invariants: exchange matrix, R-quotient dimensions, Def dimensions
4. Right-equivalence certificate when the identification is complete
5. Direct check on the split of the twice-premutated potential
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

from services.species_engine.logic.bimodule import Bimodule, GeneratorKind
from services.species_engine.logic.cyclic import cyclic_normal_form
from services.species_engine.logic.exchange import exchange_matrix
from services.species_engine.logic.fields import Scalar
from services.species_engine.logic.ideals import def_space_dims, quotient_dim
from services.species_engine.logic.mutation import mutate, premutate
from services.species_engine.logic.reduction import split
from services.species_engine.logic.series import Series

logger = logging.getLogger(__name__)


@dataclass
class Invariants:
    exchange_matrix: list[list[int]]
    quotient_dims: list[int]
    def_dims: list[int]

    def matches(self, other: Invariants) -> dict[str, bool]:
        return {
            "exchange_matrix": self.exchange_matrix == other.exchange_matrix,
            "quotient_dims": self.quotient_dims == other.quotient_dims,
            "def_dims": self.def_dims == other.def_dims,
        }


@dataclass
class InvolutionReport:
    vertex: int
    degree: int
    identification: dict[str, str]
    identification_complete: bool
    original: Invariants
    mutated_twice: Invariants
    matches: dict[str, bool]
    certificate: dict[str, Any] | None
    double_premutation: dict[str, Any]
    bimodule: Bimodule | None = None
    potential: Series | None = None
    trace: list[Any] = field(default_factory=list)

    @property
    def invariants_match(self) -> bool:
        return all(self.matches.values())


def invariants(M: Bimodule, P: Series, degree: int) -> Invariants:
    return Invariants(
        exchange_matrix=exchange_matrix(M).to_list(),
        quotient_dims=quotient_dim(M, P, "R", degree).per_degree,
        def_dims=def_space_dims(M, P, degree).per_degree,
    )


def identify_generators(
    original: Bimodule, once: Bimodule, twice: Bimodule
) -> dict[str, str]:
    """
    Map generators of mu-bar_k mu-bar_k M to generators of M.

    *(x*) and (*x)* go back to x; a name that survives both mutations maps to
    itself; what is left is matched when a block holds exactly one unmatched
    generator on each side.
    """
    mapping: dict[str, str] = {}
    for gen in twice.generators:
        if gen.kind in (GeneratorKind.LEFT_DUAL, GeneratorKind.RIGHT_DUAL):
            (inner,) = gen.origin
            if inner not in once:
                continue
            first = once.generator(inner)
            opposite = (
                GeneratorKind.RIGHT_DUAL
                if gen.kind == GeneratorKind.LEFT_DUAL
                else GeneratorKind.LEFT_DUAL
            )
            if first.kind == opposite and first.origin[0] in original:
                mapping[gen.name] = first.origin[0]
        elif gen.name in original:
            old = original.generator(gen.name)
            if (old.sigma, old.tau) == (gen.sigma, gen.tau):
                mapping[gen.name] = gen.name

    used = set(mapping.values())
    for i, j in sorted({(g.sigma, g.tau) for g in twice.generators}):
        left = [g.name for g in twice.block(i, j) if g.name not in mapping]
        right = [g.name for g in original.block(i, j) if g.name not in used]
        if len(left) == 1 and len(right) == 1:
            mapping[left[0]] = right[0]
            used.add(right[0])
    return mapping


def proportionality(Q: Series, P: Series) -> Scalar | None:
    """lambda with Q = lambda P term by term, or None."""
    if Q.is_zero() and P.is_zero():
        return Q.field.one
    if set(Q.terms) != set(P.terms):
        return None
    ratio = None
    for word, c in P.items():
        r = Q.coefficient(word) / c
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


def double_mutation_compare(
    M: Bimodule, P: Series, k: int, degree: int | None = None, seed: int | None = None
) -> InvolutionReport:
    """
    Compare mu-bar_k mu-bar_k (M, P) with (M, P).

    Flow:
    1. Mutate twice (errors propagate from mutate)
    2. Identify generators
    3. Compare invariants at truncation N
    4. Look for Q = lambda P in cyclic normal form after renaming
    5. Split mu_k mu_k P and compare the invariants of its reduced part
    """
    N = P.degree if degree is None else min(degree, P.degree)

    # 1. Two reduced mutations
    once = mutate(M, P, k, N, seed)
    twice = mutate(once.bimodule, once.potential, k, N, seed)

    # 2. Identification
    mapping = identify_generators(M, once.bimodule, twice.bimodule)
    complete = len(mapping) == len(twice.bimodule.generators) == len(
        M.generators
    ) and set(mapping.values()) == set(M.names)

    # 3. Invariants
    original = invariants(M, P, N)
    final = invariants(twice.bimodule, twice.potential, N)
    matches = original.matches(final)

    # 4. Certificate
    certificate = None
    if complete:
        renamed = twice.potential.rename(M, mapping)
        ratio = proportionality(
            cyclic_normal_form(renamed), cyclic_normal_form(P.truncate(N).part(1))
        )
        if ratio is not None:
            certificate = {"renaming": mapping, "lambda": M.species.field.format(ratio)}

    # 5. Split of the twice-premutated potential
    first = premutate(M, P, k, N)
    again = premutate(first.bimodule, first.potential, k, N)
    result = split(again.potential, seed=seed)
    direct = invariants(result.reduced_bimodule, result.reduced, N)
    double_premutation = {
        "removed": result.removed,
        "matches": original.matches(direct),
    }

    logger.info(
        f"Double mutation at {k}: invariants {matches}, "
        f"certificate {'found' if certificate else 'not found'}"
    )
    return InvolutionReport(
        vertex=k,
        degree=N,
        identification=mapping,
        identification_complete=complete,
        original=original,
        mutated_twice=final,
        matches=matches,
        certificate=certificate,
        double_premutation=double_premutation,
        bimodule=twice.bimodule,
        potential=twice.potential,
        trace=[once.split.automorphism, twice.split.automorphism],
    )
