"""
Mutation of potentials at a vertex.

premutate:  mu_k P = [kappa(P)] + Delta_k over mu_k M
mutate:     mu_k P followed by split; the reduced part over mu_k M minus the
            removed trivial pairs
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum

from common.exceptions import (
    MutationUndefinedAtVertex,
    NotDecomposable,
    NotSplittable,
)
from services.species_engine.logic.bimodule import (
    Bimodule,
    bracket_name,
    check_mutable,
    left_dual_name,
    mu_bimodule,
    right_dual_name,
)
from services.species_engine.logic.cyclic import absorb_tail, rotate
from services.species_engine.logic.exchange import (
    ExchangeMatrix,
    exchange_matrix,
    fz_mutate,
)
from services.species_engine.logic.fields import Scalar
from services.species_engine.logic.linalg import add_scaled
from services.species_engine.logic.reduction import SplitResult, split
from services.species_engine.logic.series import Series, Word

logger = logging.getLogger(__name__)


class MutationStatus(StrEnum):
    DEFINED = "defined"
    UNDEFINED = "undefined"


@dataclass
class MutationOutcome:
    """
    Result of premutate / mutate / try_mutate.

    For a reduced mutation, ``bimodule`` and ``potential`` are mu-bar_k M and
    mu-bar_k P, ``premutated_*`` keep mu_k M and mu_k P, and ``split`` holds
    the decomposition.
    """

    vertex: int
    status: MutationStatus
    bimodule: Bimodule | None = None
    potential: Series | None = None
    premutated_bimodule: Bimodule | None = None
    premutated_potential: Series | None = None
    split: SplitResult | None = None
    reason: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def defined(self) -> bool:
        return self.status == MutationStatus.DEFINED


# =============================================================================
# kappa and the bracket rewrite
# =============================================================================


def kappa(P: Series, k: int) -> Series:
    """
    Rotate every cycle that starts with a generator out of k by one step.

    The result is cyclically equivalent to P and e_k kappa(P) e_k has no
    terms of positive degree.
    """
    M = P.bimodule
    terms: dict[Word, Scalar] = {}
    for word, coeff in P.items():
        if word.degree == 0 or word.start != k:
            add_scaled(terms, {word: coeff}, 1)
            continue
        for unit_word, c in absorb_tail(M, word).items():
            add_scaled(terms, {rotate(M, unit_word, 1): c}, coeff)
    return Series(M, terms, P.degree)


def bracket_rewrite(P: Series, k: int, target: Bimodule) -> Series:
    """
    [P]: every passage (t c)(s d) through k, c into k and d out of k, becomes
    (t [c s d]).

    P must not have cycles based at k of positive degree (apply kappa first).
    """
    M = P.bimodule
    species = M.species
    unit_k = species.unit(k)
    terms: dict[Word, Scalar] = {}
    for word, coeff in P.items():
        if word.degree == 0:
            continue
        for unit_word, c in absorb_tail(M, word).items():
            pairs = list(unit_word.pairs())
            merged: list[tuple[str, str]] = []
            i = 0
            while i < len(pairs):
                label, arrow = pairs[i]
                if M.generator(arrow).tau == k and i + 1 < len(pairs):
                    s, out = pairs[i + 1]
                    merged.append((label, bracket_name(arrow, s, out, unit_k)))
                    i += 2
                else:
                    merged.append((label, arrow))
                    i += 1
            new = Word(
                unit_word.start,
                unit_word.end,
                (*(label for label, _ in merged), unit_word.tail),
                tuple(a for _, a in merged),
            )
            add_scaled(terms, {new: c}, coeff)
    return Series(target, terms, P.degree)


def delta_k(M: Bimodule, k: int, target: Bimodule, degree: int) -> Series:
    """
    The cubic correction term of mu_k P:

        sum over a out of k, b into k and s, t, r in L(k) of
        r*(t s) [b r a] (a* s^-1) (t^-1 *b)
    """
    species = M.species
    algebra = species.algebra(k)
    unit_k = algebra.unit
    terms: dict[Word, Scalar] = {}
    if degree < 3:
        return Series(target, terms, degree)
    for a in M.out_of(k):
        for b in M.into(k):
            start = b.sigma
            for s in algebra.basis:
                for t in algebra.basis:
                    middle = algebra.mul(algebra.inv_basis(s), algebra.inv_basis(t))
                    for r, coeff in algebra.mul_labels(t, s).items():
                        arrows = (
                            bracket_name(b.name, r, a.name, unit_k),
                            right_dual_name(a.name),
                            left_dual_name(b.name),
                        )
                        for x, cx in middle.items():
                            labels = (
                                species.unit(start),
                                species.unit(a.tau),
                                x,
                                species.unit(start),
                            )
                            word = Word(start, start, labels, arrows)
                            add_scaled(terms, {word: coeff * cx}, 1)
    return Series(target, terms, degree)


# =============================================================================
# Premutation and mutation
# =============================================================================


def premutate(
    M: Bimodule, P: Series, k: int, degree: int | None = None
) -> MutationOutcome:
    """
    mu_k M and mu_k P = [kappa(P)] + Delta_k.

    Degree-0 terms of P are dropped; they play no role in any derivative.

    Raises:
        MutationUndefinedAtVertex: loops, or a 2-cycle through k.
    """
    if P.bimodule != M:
        P = P.rehome(M)
    N = P.degree if degree is None else min(degree, P.degree)
    check_mutable(M, k)
    mu_M = mu_bimodule(M, k)
    rotated = kappa(P.truncate(N).part(1), k)
    mu_P = bracket_rewrite(rotated, k, mu_M) + delta_k(M, k, mu_M, N)
    logger.debug(f"Premutation at {k}: {mu_P}")
    return MutationOutcome(
        vertex=k,
        status=MutationStatus.DEFINED,
        bimodule=mu_M,
        potential=mu_P,
        premutated_bimodule=mu_M,
        premutated_potential=mu_P,
    )


def mutate(
    M: Bimodule,
    P: Series,
    k: int,
    degree: int | None = None,
    seed: int | None = None,
) -> MutationOutcome:
    """
    Reduced mutation mu-bar_k.

    Raises:
        MutationUndefinedAtVertex: premutation is undefined at k.
        NotSplittable: Xi_2 of the premutated potential is not Z-free.
    """
    pre = premutate(M, P, k, degree)
    try:
        result = split(pre.potential, seed=seed)
    except NotDecomposable as e:
        raise NotSplittable(k, e.details.get("diagnostics")) from e
    logger.info(
        f"Mutated at vertex {k}: removed {result.removed}, "
        f"{len(result.reduced_bimodule.generators)} generators remain"
    )
    return MutationOutcome(
        vertex=k,
        status=MutationStatus.DEFINED,
        bimodule=result.reduced_bimodule,
        potential=result.reduced,
        premutated_bimodule=pre.bimodule,
        premutated_potential=pre.potential,
        split=result,
    )


def try_mutate(
    M: Bimodule,
    P: Series,
    k: int,
    degree: int | None = None,
    seed: int | None = None,
) -> MutationOutcome:
    """Like :func:`mutate`, but failures come back as an undefined outcome."""
    try:
        return mutate(M, P, k, degree, seed)
    except (MutationUndefinedAtVertex, NotSplittable) as e:
        return MutationOutcome(
            vertex=k,
            status=MutationStatus.UNDEFINED,
            reason=e.message,
            details={"code": e.code, **e.details},
        )


def matrix_coherent(M: Bimodule, outcome: MutationOutcome) -> bool:
    """B(mu-bar_k M) == fz_mutate(B(M), k)."""
    if not outcome.defined or outcome.bimodule is None:
        return False
    expected: ExchangeMatrix = fz_mutate(exchange_matrix(M), outcome.vertex)
    return exchange_matrix(outcome.bimodule) == expected
