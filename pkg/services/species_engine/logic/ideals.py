"""
Truncated two-sided ideals and quotient dimensions.

The closure of the ideal generated by g_1, ..., g_r is represented, in
degrees <= N, by the F-span of every u * s g t * v with u, v canonical words.
Rows are eliminated block by block (an ideal is a sum of its blocks
e_i I e_j) with the degree-first word order, so pivot counts per degree
give the associated graded dimensions.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from services.species_engine.logic.bimodule import Bimodule
from services.species_engine.logic.calculus import jacobian_generators, r_generators
from services.species_engine.logic.cyclic import (
    cyclic_normal_form,
    necklace_representative,
)
from services.species_engine.logic.fields import Scalar
from services.species_engine.logic.linalg import EchelonBasis, add_scaled
from services.species_engine.logic.series import (
    Series,
    Word,
    label_word,
    multiply_words,
    word_sort_key,
)

logger = logging.getLogger(__name__)

Block = tuple[int, int]


# =============================================================================
# Words
# =============================================================================


def enumerate_words(
    M: Bimodule, degree: int, start: int | None = None
) -> Iterator[Word]:
    """Every canonical word of degree <= degree, shortest first."""
    species = M.species
    starts = species.vertices if start is None else [start]
    layer = [label_word(v, s) for v in starts for s in species.labels(v)]
    for d in range(degree + 1):
        yield from layer
        if d == degree:
            break
        layer = [
            Word(w.start, g.tau, (*w.labels, t), (*w.arrows, g.name))
            for w in layer
            for g in M.out_of(w.end)
            for t in species.labels(g.tau)
        ]


def count_words(M: Bimodule, degree: int) -> list[np.ndarray]:
    """counts[d][i-1, j-1] = number of canonical words of degree d from i to j."""
    species = M.species
    n = species.n
    D = np.diag(np.asarray(species.dims, dtype=np.int64))
    A = np.zeros((n, n), dtype=np.int64)
    for g in M.generators:
        A[g.sigma - 1, g.tau - 1] += 1
    step = A @ D
    counts = [D.copy()]
    for _ in range(degree):
        counts.append(counts[-1] @ step)
    return counts


def _unit_tail_words(M: Bimodule, degree: int) -> dict[int, list[Word]]:
    """Words ending at each vertex with unit tail, e_i included."""
    species = M.species
    ending: dict[int, list[Word]] = defaultdict(list)
    for w in enumerate_words(M, degree):
        if w.tail == species.unit(w.end):
            ending[w.end].append(w)
    return ending


def _unit_head_words(M: Bimodule, degree: int) -> dict[int, list[Word]]:
    """Words starting at each vertex with unit first label, e_j included."""
    species = M.species
    starting: dict[int, list[Word]] = defaultdict(list)
    for w in enumerate_words(M, degree):
        if w.labels[0] == species.unit(w.start):
            starting[w.start].append(w)
    return starting


# =============================================================================
# Ideal spans
# =============================================================================


@dataclass
class IdealSpan:
    """Per-block echelon bases of a truncated ideal."""

    bimodule: Bimodule
    degree: int
    blocks: dict[Block, EchelonBasis] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return sum(b.rank for b in self.blocks.values())

    def pivot_counts(self, blocks: Iterable[Block] | None = None) -> list[int]:
        """Number of pivots in each degree 0..N, optionally over some blocks."""
        keep = set(self.blocks) if blocks is None else set(blocks)
        counts = [0] * (self.degree + 1)
        for block, basis in self.blocks.items():
            if block not in keep:
                continue
            for d, c in basis.pivot_counts(lambda w: w.degree).items():
                counts[d] += c
        return counts

    def block_ranks(self) -> dict[Block, int]:
        return {b: basis.rank for b, basis in sorted(self.blocks.items()) if basis.rank}

    def contains(self, h: Series) -> bool:
        """True if h^{<=N} lies in the span."""
        pieces: dict[Block, dict[Word, Scalar]] = defaultdict(dict)
        for word, coeff in h.truncate(self.degree).items():
            pieces[word.start, word.end][word] = coeff
        for block, vector in pieces.items():
            basis = self.blocks.get(block)
            if basis is None or not basis.contains(vector):
                return False
        return True

    def rows(
        self, blocks: Iterable[Block] | None = None
    ) -> Iterator[dict[Word, Scalar]]:
        keep = set(self.blocks) if blocks is None else set(blocks)
        for block in sorted(self.blocks):
            if block in keep:
                yield from self.blocks[block].rows()


def _bimodule_span(gens: Iterable[Series], degree: int) -> dict[Block, EchelonBasis]:
    """Legible components of the generators and their S-bimodule spans."""
    spans: dict[Block, EchelonBasis] = {}
    for g in gens:
        M = g.bimodule
        species = M.species
        components: dict[Block, dict[Word, Scalar]] = defaultdict(dict)
        for word, coeff in g.truncate(degree).items():
            components[word.start, word.end][word] = coeff
        for (i, j), comp in components.items():
            basis = spans.setdefault((i, j), EchelonBasis(word_sort_key))
            for s in species.labels(i):
                for t in species.labels(j):
                    row: dict[Word, Scalar] = {}
                    for word, coeff in comp.items():
                        left_part = multiply_words(M, label_word(i, s), word)
                        for left, c1 in left_part.items():
                            right = multiply_words(M, left, label_word(j, t))
                            add_scaled(row, right, coeff * c1)
                    basis.add(row)
    return spans


def ideal_span(
    gens: Iterable[Series],
    degree: int,
    M: Bimodule | None = None,
    blocks: Iterable[Block] | None = None,
) -> IdealSpan:
    """
    Span of u * x * v for x in the S-span of the generators, truncated at N.

    Args:
        gens: Ideal generators.
        degree: Truncation N.
        M: Bimodule, needed when gens may be empty.
        blocks: Restrict the computation to these blocks of the ideal.

    Returns:
        IdealSpan: Per-block reduced echelon bases.
    """
    gens = list(gens)
    if M is None:
        if not gens:
            raise ValueError("ideal_span needs a bimodule when there are no generators")
        M = gens[0].bimodule
    keep = None if blocks is None else set(blocks)
    span = IdealSpan(M, degree)
    sources = _bimodule_span(gens, degree)
    if not sources:
        return span
    lefts = _unit_tail_words(M, degree)
    rights = _unit_head_words(M, degree)
    for (i, j), basis in sorted(sources.items()):
        for row in basis.rows():
            low = min(w.degree for w in row)
            for u in lefts.get(i, ()):
                if u.degree + low > degree:
                    continue
                for v in rights.get(j, ()):
                    if u.degree + v.degree + low > degree:
                        continue
                    target = (u.start, v.end)
                    if keep is not None and target not in keep:
                        continue
                    budget = degree - u.degree - v.degree
                    product: dict[Word, Scalar] = {}
                    for w, c in row.items():
                        if w.degree > budget:
                            continue
                        for uw, c1 in multiply_words(M, u, w).items():
                            add_scaled(product, multiply_words(M, uw, v), c * c1)
                    span.blocks.setdefault(target, EchelonBasis(word_sort_key)).add(
                        product
                    )
    logger.debug(f"Ideal span at N={degree}: rank {span.rank}")
    return span


# =============================================================================
# Quotients
# =============================================================================


@dataclass(frozen=True)
class QuotientDimensions:
    ideal: str
    degree: int
    per_degree: list[int]
    total: int
    stabilized: bool
    exclude_vertex: int | None = None


def ideal_generators(P: Series, ideal: Literal["R", "J"]) -> list[Series]:
    if ideal == "R":
        return r_generators(P)
    if ideal == "J":
        return jacobian_generators(P)
    raise ValueError(f"unknown ideal {ideal!r}")


def quotient_dim(
    M: Bimodule,
    P: Series,
    ideal: Literal["R", "J"] = "R",
    degree: int | None = None,
    exclude_vertex: int | None = None,
) -> QuotientDimensions:
    """
    Truncated dimensions of F_S(M) / R(P) or F_S(M) / J(P).

    With ``exclude_vertex=k`` only the corner e_k^ (.) e_k^ is counted,
    e_k^ = 1 - e_k. ``stabilized`` means degree N contributes nothing.
    """
    N = P.degree if degree is None else degree
    vertices = [v for v in M.species.vertices if v != exclude_vertex]
    corner = [(i, j) for i in vertices for j in vertices]
    if P.bimodule != M:
        P = P.rehome(M)
    span = ideal_span(ideal_generators(P, ideal), N, M, corner)
    counts = count_words(M, N)
    pivots = span.pivot_counts(corner)
    per_degree = []
    for d in range(N + 1):
        words = sum(int(counts[d][i - 1, j - 1]) for i, j in corner)
        per_degree.append(words - pivots[d])
    return QuotientDimensions(
        ideal=ideal,
        degree=N,
        per_degree=per_degree,
        total=sum(per_degree),
        stabilized=per_degree[-1] == 0,
        exclude_vertex=exclude_vertex,
    )


@dataclass(frozen=True)
class DefDimensions:
    degree: int
    per_degree: list[int]
    total: int


def necklace_representatives(M: Bimodule, degree: int) -> list[Word]:
    """One unit-tail cycle per cyclic class of degree 1..N, in word order."""
    species = M.species
    reps: set[Word] = set()
    for w in enumerate_words(M, degree):
        if w.degree and w.is_cycle and w.tail == species.unit(w.start):
            reps.add(necklace_representative(M, w))
    return sorted(reps, key=word_sort_key)


def necklace_counts(M: Bimodule, degree: int) -> list[int]:
    """Number of cyclic classes (with labels) in each degree 0..N; degree 0 is 0."""
    counts = [0] * (degree + 1)
    for rep in necklace_representatives(M, degree):
        counts[rep.degree] += 1
    return counts


def def_space_dims(M: Bimodule, P: Series, degree: int | None = None) -> DefDimensions:
    """
    Truncated dimensions of Def(M, P): F modulo S, commutators and R(P).

    Cyclic words are projected onto necklace representatives; the quotient in
    degree d is the number of representatives minus the rank of the projected
    R(P) rows with pivot in degree d.
    """
    N = P.degree if degree is None else degree
    diagonal = [(i, i) for i in M.species.vertices]
    span = ideal_span(r_generators(P), N, M, diagonal)
    projected = EchelonBasis(word_sort_key)
    for row in span.rows(diagonal):
        image = cyclic_normal_form(Series(M, row, N)).part(1)
        projected.add(dict(image.terms))
    pivots = projected.pivot_counts(lambda w: w.degree)
    reps = necklace_counts(M, N)
    per_degree = [0] + [reps[d] - pivots.get(d, 0) for d in range(1, N + 1)]
    return DefDimensions(degree=N, per_degree=per_degree, total=sum(per_degree))


def def_space_dim(M: Bimodule, P: Series, degree: int | None = None) -> int:
    return def_space_dims(M, P, degree).total
