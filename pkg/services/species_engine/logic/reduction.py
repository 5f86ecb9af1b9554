"""
Quadratic analysis and splitting of potentials.

Flow of :func:`split`:
    1. Compute the image Xi_2 of X^{P2} block by block.
    2. For every 2-cycle pair, change basis on the larger block so that
       Xi_2 is spanned by new generators g_k.
    3. Read off w_k = X_{g_k*}(P2) on the smaller block and change basis
       there too; now P2 is cyclically equivalent to the sum of a_k b_k.
    4. Rearrange P into sum a_k v_k + sum u_k b_k + P'' and substitute
       a_k -> a_k - u_k, b_k -> b_k - (v_k - b_k) until nothing is left.
    5. Return the trivial part, the reduced part P'' and the composed
       automorphism.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any

from common.errors import ErrorCodes
from common.exceptions import InternalError, NotDecomposable, ValidationError
from services.species_engine.core.config import get_settings
from services.species_engine.logic.bimodule import Bimodule, Generator
from services.species_engine.logic.calculus import delta, x_gen
from services.species_engine.logic.cyclic import (
    absorb_tail,
    cyclic_normal_form,
    rotate,
)
from services.species_engine.logic.fields import Scalar
from services.species_engine.logic.linalg import EchelonBasis, add_scaled
from services.species_engine.logic.morphisms import GeneratorMap, invert_linear
from services.species_engine.logic.series import (
    Series,
    Word,
    label_word,
    multiply_words,
    sum_series,
    word_sort_key,
)

logger = logging.getLogger(__name__)

Block = tuple[int, int]
Vector = dict[Word, Scalar]


def quadratic_part(P: Series) -> Series:
    return P.homogeneous(2)


# =============================================================================
# Xi_2 and Z-freeness
# =============================================================================


def s_span_rows(M: Bimodule, vector: Vector, i: int, j: int) -> list[Vector]:
    """s * x * t for s in L(i), t in L(j), x legible in block (i, j)."""
    species = M.species
    rows = []
    for s in species.labels(i):
        for t in species.labels(j):
            row: Vector = {}
            for word, coeff in vector.items():
                for left, c1 in multiply_words(M, label_word(i, s), word).items():
                    right = multiply_words(M, left, label_word(j, t))
                    add_scaled(row, right, coeff * c1)
            if row:
                rows.append(row)
    return rows


def block_words(M: Bimodule, i: int, j: int) -> list[Word]:
    """F-basis {s a t} of e_i M e_j."""
    species = M.species
    return [
        Word(i, j, (s, t), (g.name,))
        for g in M.block(i, j)
        for s in species.labels(i)
        for t in species.labels(j)
    ]


@dataclass
class Xi2Image:
    """Per-block F-bases of Xi_2(P), with the X values that span them."""

    bimodule: Bimodule
    blocks: dict[Block, EchelonBasis] = field(default_factory=dict)
    values: dict[Block, list[Vector]] = field(default_factory=dict)

    def dim(self, i: int, j: int) -> int:
        basis = self.blocks.get((i, j))
        return basis.rank if basis else 0

    def dims(self) -> dict[Block, int]:
        return {b: basis.rank for b, basis in sorted(self.blocks.items()) if basis.rank}

    @property
    def total(self) -> int:
        return sum(self.dims().values())


def xi2_image(P: Series) -> Xi2Image:
    """Xi_2(P) = S-span of X_{a*}(P2) over every generator a."""
    M = P.bimodule
    P2 = quadratic_part(P)
    derivative = delta(P2, strict=False)
    image = Xi2Image(M)
    for gen in M.generators:
        value = x_gen(P2, gen.name, derivative)
        if value.is_zero():
            continue
        # X_{a*} lands in e_tau(a) M e_sigma(a)
        block = (gen.tau, gen.sigma)
        vector = dict(value.terms)
        image.values.setdefault(block, []).append(vector)
        basis = image.blocks.setdefault(block, EchelonBasis(word_sort_key))
        basis.extend(s_span_rows(M, vector, *block))
    return image


@dataclass
class FreeExtraction:
    generators: list[Vector]
    span: EchelonBasis
    complete: bool


def extract_free(
    M: Bimodule,
    block: Block,
    target: EchelonBasis,
    candidates: list[Vector],
    rng: random.Random,
    attempts: int,
    bound: int,
    start: EchelonBasis | None = None,
) -> FreeExtraction:
    """
    Greedily pick legible elements whose S-spans are free and independent.

    A candidate is accepted when its S-span adds exactly d(i) d(j) dimensions
    to the current span. Candidates come first, then random combinations of
    the target rows.
    """
    i, j = block
    unit = M.species.dim(i) * M.species.dim(j)
    span = start.copy() if start is not None else EchelonBasis(word_sort_key)
    goal = target.rank
    accepted: list[Vector] = []
    rows = target.rows()
    ground = M.species.field

    def generic() -> Iterator[Vector]:
        yield from candidates
        for _ in range(attempts):
            vector: Vector = {}
            for row in rows:
                add_scaled(vector, row, ground.coerce(rng.randint(-bound, bound)))
            yield vector

    for vector in generic():
        if span.rank >= goal:
            break
        if not vector:
            continue
        trial = span.copy()
        if trial.extend(s_span_rows(M, vector, i, j)) == unit:
            accepted.append(vector)
            span = trial
    return FreeExtraction(accepted, span, span.rank == goal)


def _is_free(
    M: Bimodule, block: Block, image: Xi2Image, rng: random.Random
) -> bool:
    basis = image.blocks.get(block)
    if basis is None or not basis.rank:
        return True
    i, j = block
    if basis.rank % (M.species.dim(i) * M.species.dim(j)):
        return False
    cfg = get_settings().split
    extraction = extract_free(
        M,
        block,
        basis,
        image.values.get(block, []),
        rng,
        cfg.SPLIT_RANDOM_ATTEMPTS,
        cfg.SPLIT_COEFF_BOUND,
    )
    return extraction.complete


@dataclass(frozen=True)
class QuadraticClass:
    trivial: bool
    maximal: bool
    decomposable: bool
    diagnostics: dict[str, Any]


def _block_key(block: Block) -> str:
    return f"{block[0]},{block[1]}"


def _xi2_report(image: Xi2Image) -> dict[str, int]:
    return {_block_key(b): d for b, d in image.dims().items()}


def classify_quadratic(P: Series, seed: int | None = None) -> QuadraticClass:
    """
    Trivial, 2-maximal and decomposable tests for the quadratic part of P.

    2-maximal: for every pair (i, j) with both blocks nonzero and
    dim e_i M e_j <= dim e_j M e_i, X^{P2} is injective on (e_i M e_j)*,
    i.e. dim e_j Xi_2 e_i = dim e_i M e_j. Vacuous without 2-cycles.
    """
    M = P.bimodule
    image = xi2_image(P)
    rng = random.Random(get_settings().split.SPLIT_SEED if seed is None else seed)
    dims = M.block_dims()
    trivial = image.total == M.dim
    maximal_pairs = [
        (i, j)
        for (i, j), d in dims.items()
        if (j, i) in dims and d <= dims[j, i]
    ]
    maximal = all(image.dim(j, i) == dims[i, j] for i, j in maximal_pairs)
    decomposable = all(_is_free(M, block, image, rng) for block in sorted(image.blocks))
    diagnostics = {
        "block_dims": {_block_key(b): d for b, d in sorted(dims.items())},
        "xi2_dims": _xi2_report(image),
        "maximal_pairs": [_block_key(b) for b in sorted(maximal_pairs)],
    }
    return QuadraticClass(trivial, maximal, decomposable, diagnostics)


# =============================================================================
# Splitting
# =============================================================================


@dataclass
class SplitResult:
    """
    Attributes:
        trivial: sum of a_k b_k over the normalized bimodule.
        reduced: P'' over the reduced bimodule, no quadratic part.
        automorphism: M -> normalized bimodule; applied to P it is cyclically
            equivalent to trivial + reduced.
        removed: names of the a_k and b_k.
        trivial_pairs: (a_k, b_k) name pairs.
    """

    trivial: Series
    reduced: Series
    automorphism: GeneratorMap
    removed: list[str]
    trivial_pairs: list[tuple[str, str]]
    normalized_bimodule: Bimodule
    reduced_bimodule: Bimodule
    rounds: int = 0
    trace: list[GeneratorMap] = field(default_factory=list)


def _pair_sides(M: Bimodule) -> list[tuple[Block, Block]]:
    """(small, large) blocks of every 2-cycle pair; ties put (i, j), i < j, small."""
    sides = []
    for i, j in M.two_cycle_pairs():
        if M.block_dim(i, j) <= M.block_dim(j, i):
            sides.append(((i, j), (j, i)))
        else:
            sides.append(((j, i), (i, j)))
    return sides


def _complete(
    M: Bimodule,
    block: Block,
    extraction: FreeExtraction,
    rng: random.Random,
    attempts: int,
    bound: int,
) -> list[Vector]:
    """Free generators of the whole block: the extracted ones plus a complement."""
    i, j = block
    unit = M.species.dim(i) * M.species.dim(j)
    full = EchelonBasis(word_sort_key)
    one = M.species.field.one
    full.extend({w: one} for w in block_words(M, i, j))
    candidates = [
        {Word(i, j, (M.species.unit(i), M.species.unit(j)), (g.name,)): one}
        for g in M.block(i, j)
    ]
    rest = extract_free(
        M, block, full, candidates, rng, attempts, bound, start=extraction.span
    )
    if not rest.complete or len(extraction.generators) + len(rest.generators) != (
        full.rank // unit
    ):
        raise InternalError(
            f"could not complete a free basis of block e{i}Me{j}",
            diagnostics={"block": _block_key(block), "rank": rest.span.rank},
        )
    return extraction.generators + rest.generators


def _unit_arrow(M: Bimodule, vector: Vector) -> str | None:
    """Name of a when vector is a nonzero multiple of 1 a 1."""
    if len(vector) != 1:
        return None
    (word,) = vector
    species = M.species
    if (
        word.degree == 1
        and word.labels[0] == species.unit(word.start)
        and word.tail == species.unit(word.end)
    ):
        return word.arrows[0]
    return None


def _name_generators(
    M: Bimodule, vectors: list[Vector], taken: set[str]
) -> list[str]:
    names = []
    for vector in vectors:
        name = _unit_arrow(M, vector)
        if name is None or name in taken:
            base = min(vector, key=word_sort_key).arrows[0]
            name = M.fresh_name(base, taken)
        taken.add(name)
        names.append(name)
    return names


def _rebuild(
    M: Bimodule, replacements: dict[Block, list[tuple[str, Vector]]]
) -> tuple[Bimodule, dict[str, Series]]:
    """New bimodule with some blocks replaced, and rho: new name -> old element."""
    generators: list[Generator] = []
    rho: dict[str, Series] = {}
    emitted: set[Block] = set()
    for gen in M.generators:
        block = (gen.sigma, gen.tau)
        if block not in replacements:
            generators.append(gen)
            rho[gen.name] = Series.path(M, [gen.name], 1)
            continue
        if block in emitted:
            continue
        emitted.add(block)
        for name, vector in replacements[block]:
            old = M.generator(name) if name in M else None
            if old is not None and (old.sigma, old.tau) == block:
                generators.append(old)
            else:
                generators.append(Generator(name, *block))
            rho[name] = Series(M, vector, 1)
    return Bimodule(M.species, tuple(generators)), rho


def _decompose(
    P: Series, pairs: list[tuple[str, str]]
) -> tuple[dict[str, Vector], dict[str, Vector], Vector]:
    """
    P ~ sum a_k v_k + sum u_k b_k + P''.

    A word with some a_k (least k, first occurrence) goes to v_k; otherwise
    a word with some b_k goes to u_k; everything else stays in P''.
    """
    M = P.bimodule
    u: dict[str, Vector] = {a: {} for a, _ in pairs}
    v: dict[str, Vector] = {a: {} for a, _ in pairs}
    rest: Vector = {}
    for word, coeff in P.items():
        if word.degree == 0:
            add_scaled(rest, {word: coeff}, 1)
            continue
        for unit_word, c in absorb_tail(M, word).items():
            placed = False
            for a, b in pairs:
                if a in unit_word.arrows:
                    rotated = rotate(M, unit_word, unit_word.arrows.index(a))
                    tail = rotated.labels[0]
                    tail_word = Word(
                        M.generator(a).tau,
                        rotated.end,
                        (*rotated.labels[1:-1], tail),
                        rotated.arrows[1:],
                    )
                    add_scaled(v[a], {tail_word: c}, coeff)
                    placed = True
                    break
            if not placed:
                for a, b in pairs:
                    if b in unit_word.arrows:
                        position = (unit_word.arrows.index(b) + 1) % unit_word.degree
                        rotated = rotate(M, unit_word, position)
                        head = Word(
                            rotated.start,
                            M.generator(b).sigma,
                            rotated.labels[:-1],
                            rotated.arrows[:-1],
                        )
                        add_scaled(u[a], {head: c}, coeff)
                        placed = True
                        break
            if not placed:
                add_scaled(rest, {unit_word: c}, coeff)
    return u, v, rest


def split(
    P: Series, degree: int | None = None, seed: int | None = None
) -> SplitResult:
    """
    Split P into trivial + reduced parts up to automorphism and cyclic equivalence.

    Args:
        P: Potential over a loop-free bimodule.
        degree: Truncation N; defaults to P.degree.
        seed: Seed for the generic choices; defaults to SPLIT_SEED.

    Returns:
        SplitResult: Trivial part, reduced part and the automorphism.

    Raises:
        ValidationError: The bimodule has loops or P is not cyclic.
        NotDecomposable: Xi_2(P) is not Z-freely generated.
        InternalError: The substitution did not converge.
    """
    M = P.bimodule
    N = P.degree if degree is None else min(degree, P.degree)
    if M.has_loops:
        raise ValidationError(
            ErrorCodes.LOOPS_NOT_ALLOWED, "split needs a loop-free bimodule"
        )
    if not P.is_cyclic():
        raise ValidationError(ErrorCodes.NON_CYCLIC, "potential must be cyclic")
    cfg = get_settings().split
    rng = random.Random(cfg.SPLIT_SEED if seed is None else seed)
    attempts, bound = cfg.SPLIT_RANDOM_ATTEMPTS, cfg.SPLIT_COEFF_BOUND
    P = P.truncate(N)
    P2 = quadratic_part(P)
    image = xi2_image(P)
    taken: set[str] = set()

    # Large sides first: Xi_2 there becomes the span of new generators.
    large_replacements: dict[Block, list[tuple[str, Vector]]] = {}
    free_counts: dict[Block, int] = {}
    sides = _pair_sides(M)
    for small, large in sides:
        basis = image.blocks.get(large)
        if basis is None or not basis.rank:
            continue
        unit = M.species.dim(large[0]) * M.species.dim(large[1])
        if basis.rank % unit:
            raise NotDecomposable(
                f"Xi_2 block e{large[0]}Me{large[1]} has dimension {basis.rank}, "
                f"not a multiple of {unit}",
                {"xi2_dims": _xi2_report(image)},
            )
        extraction = extract_free(
            M, large, basis, image.values.get(large, []), rng, attempts, bound
        )
        if not extraction.complete:
            raise NotDecomposable(
                f"Xi_2 block e{large[0]}Me{large[1]} is not Z-freely generated",
                {"xi2_dims": _xi2_report(image)},
            )
        vectors = _complete(M, large, extraction, rng, attempts, bound)
        free_counts[large] = len(extraction.generators)
        large_replacements[large] = list(
            zip(_name_generators(M, vectors, taken), vectors, strict=True)
        )

    M_mid, rho_mid = _rebuild(M, large_replacements)
    theta_mid = invert_linear(GeneratorMap(M_mid, M, rho_mid, N))
    P2_mid = theta_mid.apply(P2, N)
    derivative = delta(P2_mid, strict=False)

    # Small sides: w_k = X_{g_k*}(P2) must again be a free family.
    small_replacements: dict[Block, list[tuple[str, Vector]]] = {}
    pairs: list[tuple[str, str]] = []
    for small, large in sides:
        if large not in large_replacements:
            continue
        r = free_counts[large]
        g_names = [name for name, _ in large_replacements[large][:r]]
        w = [dict(x_gen(P2_mid, g, derivative).rehome(M).terms) for g in g_names]
        unit = M.species.dim(small[0]) * M.species.dim(small[1])
        span = EchelonBasis(word_sort_key)
        for vector in w:
            span.extend(s_span_rows(M, vector, *small))
        if span.rank != r * unit:
            raise NotDecomposable(
                f"Xi_2 block e{small[0]}Me{small[1]} is not Z-freely generated",
                {
                    "xi2_dims": _xi2_report(image),
                    "rank": span.rank,
                    "expected": r * unit,
                },
            )
        extraction = FreeExtraction(w, span, True)
        vectors = _complete(M, small, extraction, rng, attempts, bound)
        names = _name_generators(M, vectors, taken)
        small_replacements[small] = list(zip(names, vectors, strict=True))
        pairs.extend(zip(names[:r], g_names, strict=True))

    M_new, rho = _rebuild(M, {**large_replacements, **small_replacements})
    theta = invert_linear(GeneratorMap(M_new, M, rho, N))
    current = cyclic_normal_form(theta.apply(P, N))
    total = theta
    trace = [theta]
    logger.info(f"Split normalized {len(pairs)} trivial pairs at N={N}")

    cap = max(math.ceil(math.log2(N)), 0) + 2 if N >= 2 else 2
    rounds = 0
    for rounds in itertools.count():
        u, v, rest = _decompose(current, pairs)
        v_high: dict[str, Series] = {}
        for a, b in pairs:
            b_word = _unit_word(M_new, b)
            linear_v = {w: c for w, c in v[a].items() if w.degree == 1}
            linear_u = {w: c for w, c in u[a].items() if w.degree == 1}
            if rounds == 0 and N >= 2 and (linear_v != {b_word: 1} or linear_u):
                raise InternalError(
                    "quadratic part is not in normal form after the basis change",
                    diagnostics={"pair": [a, b]},
                )
            high = dict(v[a])
            add_scaled(high, {b_word: 1}, -1)
            v_high[a] = Series(M_new, high, N)
        if all(not u[a] and v_high[a].is_zero() for a, _ in pairs):
            break
        if rounds >= cap:
            raise InternalError(
                "splitting substitution did not converge",
                code=ErrorCodes.SPLIT_DIVERGED,
                diagnostics={"rounds": rounds, "degree": N},
            )
        images = {}
        for a, b in pairs:
            images[a] = Series.path(M_new, [a], N) - Series(M_new, u[a], N)
            images[b] = Series.path(M_new, [b], N) - v_high[a]
        phi = GeneratorMap.build(M_new, M_new, images, N)
        current = cyclic_normal_form(phi.apply(current, N))
        total = phi.compose(total)
        trace.append(phi)
        logger.debug(f"Split round {rounds + 1}: {phi}")

    removed = [name for pair in pairs for name in pair]
    M_red = M_new.without(removed)
    reduced = cyclic_normal_form(Series(M_new, rest, N)).rehome(M_red)
    if not reduced.homogeneous(2).is_zero():
        raise InternalError(
            "reduced part has a quadratic component",
            diagnostics={"reduced": reduced.text()},
        )
    trivial = sum_series(
        (Series.path(M_new, [a, b], N) for a, b in pairs), M_new, N
    )
    logger.info(
        f"Split finished after {rounds} substitution rounds; "
        f"removed {len(removed)} generators"
    )
    return SplitResult(
        trivial=trivial,
        reduced=reduced,
        automorphism=total,
        removed=removed,
        trivial_pairs=pairs,
        normalized_bimodule=M_new,
        reduced_bimodule=M_red,
        rounds=rounds,
        trace=trace,
    )


def _unit_word(M: Bimodule, name: str) -> Word:
    gen = M.generator(name)
    species = M.species
    labels = (species.unit(gen.sigma), species.unit(gen.tau))
    return Word(gen.sigma, gen.tau, labels, (name,))
