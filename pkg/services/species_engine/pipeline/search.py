"""
Nondegeneracy Search

Rejection sampling for potentials that survive a prescribed mutation sequence:
1. Draw a potential with coefficients from a finite pool on every necklace
   of degree 2..N (trial i draws from random.Random(seed + i))
2. Run the sequence; each step must premutate, pass the 2-maximality check,
   split, and leave a 2-acyclic bimodule
3. Return the witness with the smallest trial index, or raise with per-step
   failure statistics
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Any

from common.errors import ErrorCodes
from common.exceptions import (
    MutationUndefinedAtVertex,
    PreconditionError,
    SearchExhausted,
    ValidationError,
)
from services.species_engine.core.config import get_settings
from services.species_engine.logic.bimodule import Bimodule
from services.species_engine.logic.exchange import exchange_matrix, fz_mutate
from services.species_engine.logic.ideals import necklace_representatives
from services.species_engine.logic.mutation import premutate, try_mutate
from services.species_engine.logic.reduction import classify_quadratic
from services.species_engine.logic.series import Series

logger = logging.getLogger(__name__)

FAILURE_REASONS = ("undefined", "not_maximal", "not_splittable", "two_cycles")


@dataclass
class TrialOutcome:
    index: int
    failed_step: int | None = None
    reason: str | None = None

    @property
    def success(self) -> bool:
        return self.failed_step is None


@dataclass
class SearchResult:
    potential: Series
    trial: int
    seed: int
    sequence: list[int]
    matrices: list[list[list[int]]]
    fz_coherent: bool
    statistics: list[dict[str, Any]] = field(default_factory=list)


# =============================================================================
# Trials
# =============================================================================


def random_potential(
    M: Bimodule, degree: int, pool: Sequence[int], rng: random.Random
) -> Series:
    """Sum of c_w w over necklace representatives w of degree 2..N, c_w in pool."""
    ground = M.species.field
    terms = {}
    for rep in necklace_representatives(M, degree):
        if rep.degree < 2:
            continue
        terms[rep] = ground.coerce(rng.choice(pool))
    return Series(M, terms, degree)


def run_sequence(
    M: Bimodule, P: Series, seq: Sequence[int], degree: int, seed: int | None = None
) -> tuple[int | None, str | None, list[Bimodule]]:
    """
    Mutate along seq.

    Returns:
        (failed step, reason, bimodules visited); the step is None on success.
    """
    bimodules = [M]
    current_M, current_P = M, P
    for step, k in enumerate(seq):
        try:
            pre = premutate(current_M, current_P, k, degree)
        except MutationUndefinedAtVertex:
            return step, "undefined", bimodules
        if not classify_quadratic(pre.potential, seed).maximal:
            return step, "not_maximal", bimodules
        outcome = try_mutate(current_M, current_P, k, degree, seed)
        if not outcome.defined:
            return step, "not_splittable", bimodules
        if not outcome.bimodule.is_two_acyclic:
            return step, "two_cycles", bimodules
        current_M, current_P = outcome.bimodule, outcome.potential
        bimodules.append(current_M)
    return None, None, bimodules


def run_trial(
    M: Bimodule,
    seq: Sequence[int],
    index: int,
    seed: int,
    pool: Sequence[int],
    degree: int,
) -> TrialOutcome:
    P = random_potential(M, degree, pool, random.Random(seed + index))
    step, reason, _ = run_sequence(M, P, seq, degree)
    return TrialOutcome(index=index, failed_step=step, reason=reason)


def _parallel_trials(
    procs, workers: int, M: Bimodule, seq, trials: int, seed: int, pool, degree: int
) -> list[TrialOutcome]:
    """Batches of trials on a process pool, up to the first success in index order."""
    outcomes: list[TrialOutcome] = []
    batch = workers * 4
    for first in range(0, trials, batch):
        jobs = [
            procs.apply_async(run_trial, (M, seq, i, seed, pool, degree))
            for i in range(first, min(first + batch, trials))
        ]
        for job in jobs:
            outcomes.append(job.get())
            if outcomes[-1].success:
                return outcomes
        logger.debug(f"Trials {first}..{first + len(jobs) - 1} failed")
    return outcomes


def _statistics(outcomes: list[TrialOutcome], seq: Sequence[int]) -> list[dict]:
    counts: dict[int, Counter] = {step: Counter() for step in range(len(seq))}
    for outcome in outcomes:
        if not outcome.success:
            counts[outcome.failed_step][outcome.reason] += 1
    return [
        {
            "step": step,
            "vertex": k,
            **{reason: counts[step][reason] for reason in FAILURE_REASONS},
        }
        for step, k in enumerate(seq)
    ]


# =============================================================================
# Search
# =============================================================================


def search_nondegenerate(
    M: Bimodule,
    seq: Sequence[int],
    trials: int | None = None,
    seed: int | None = None,
    pool: Sequence[int] | None = None,
    degree: int | None = None,
    workers: int | None = None,
) -> SearchResult:
    """
    Find a potential for which every mutation of seq is defined.

    Flow:
    1. Check the field is infinite and M has no 2-cycles
    2. Evaluate trials in index order, in batches when workers > 1
    3. Rebuild the witness of the smallest successful index and record the
       exchange-matrix chain

    Args:
        M: 2-acyclic bimodule over an infinite field.
        seq: Vertices to mutate at, in order.
        trials: Number of draws (SEARCH_TRIALS).
        seed: Base seed; trial i uses seed + i (SEARCH_SEED).
        pool: Integer coefficient pool (SEARCH_POOL).
        degree: Truncation N (DEFAULT_DEGREE).
        workers: Worker processes (SEARCH_WORKERS).

    Returns:
        SearchResult: The witness and its exchange matrices.

    Raises:
        PreconditionError: Finite field or a 2-cycle in M.
        ValidationError: A vertex of seq is out of range.
        SearchExhausted: No trial succeeded.
    """
    settings = get_settings()
    trials = settings.search.SEARCH_TRIALS if trials is None else trials
    seed = settings.search.SEARCH_SEED if seed is None else seed
    pool = settings.search.pool() if pool is None else list(pool)
    degree = settings.DEFAULT_DEGREE if degree is None else degree
    workers = settings.search.SEARCH_WORKERS if workers is None else workers
    seq = list(seq)

    # 1. Preconditions
    if not M.species.field.is_infinite:
        raise PreconditionError(
            ErrorCodes.INFINITE_FIELD_REQUIRED,
            "the search needs an infinite ground field",
            {"field": M.species.field.name},
        )
    if not M.is_two_acyclic:
        raise PreconditionError(
            ErrorCodes.MUTATION_UNDEFINED,
            "the search needs a bimodule without loops or 2-cycles",
            {"two_cycles": [list(p) for p in M.two_cycle_pairs()]},
        )
    for k in seq:
        if k not in M.species.vertices:
            raise ValidationError(
                ErrorCodes.INVALID_INPUT, f"vertex {k} out of range", path="seq"
            )

    initial = exchange_matrix(M)
    if not seq:
        return SearchResult(
            potential=Series.zero(M, degree),
            trial=0,
            seed=seed,
            sequence=seq,
            matrices=[initial.to_list()],
            fz_coherent=True,
            statistics=[],
        )

    # 2. Trials
    logger.info(
        f"Searching {trials} trials for sequence {seq} "
        f"(seed {seed}, pool {pool}, N={degree}, workers {workers})"
    )
    if workers > 1:
        with Pool(workers) as procs:
            outcomes = _parallel_trials(
                procs, workers, M, seq, trials, seed, pool, degree
            )
    else:
        outcomes = []
        for i in range(trials):
            outcomes.append(run_trial(M, seq, i, seed, pool, degree))
            if outcomes[-1].success:
                break
    witness = next((o for o in outcomes if o.success), None)

    if witness is None:
        raise SearchExhausted(trials, _statistics(outcomes, seq))

    # 3. Witness
    P = random_potential(M, degree, pool, random.Random(seed + witness.index))
    _, _, bimodules = run_sequence(M, P, seq, degree)
    matrices = [exchange_matrix(B) for B in bimodules]
    expected = initial
    coherent = True
    for k, B in zip(seq, matrices[1:], strict=True):
        expected = fz_mutate(expected, k)
        coherent = coherent and B == expected
    logger.info(f"Witness found at trial {witness.index}")
    return SearchResult(
        potential=P,
        trial=witness.index,
        seed=seed,
        sequence=seq,
        matrices=[B.to_list() for B in matrices],
        fz_coherent=coherent,
        statistics=_statistics(outcomes, seq),
    )
