"""
Cyclic words modulo commutators.

Two tools that agree with each other:

* ``is_cyclically_equivalent`` decides P - Q in [F, F] by exact Gaussian
  elimination against the commutator span, one necklace class at a time.
* ``cyclic_normal_form`` picks a canonical representative: the tail label
  is absorbed into the first label, then the least rotation of the
  (label, generator) sequence is kept.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Iterator

from services.species_engine.logic.bimodule import Bimodule
from services.species_engine.logic.fields import Scalar
from services.species_engine.logic.linalg import EchelonBasis, add_scaled
from services.species_engine.logic.series import (
    Series,
    Word,
    label_word,
    multiply_words,
    word_sort_key,
)


def absorb_tail(M: Bimodule, word: Word) -> dict[Word, Scalar]:
    """
    t1 a1 ... am t(m+1)  ~  (t(m+1) t1) a1 ... am 1.

    Only meaningful for cycles of degree >= 1; the result has unit tails.
    """
    algebra = M.species.algebra(word.start)
    if word.tail == algebra.unit:
        return {word: algebra.field.one}
    product = algebra.mul_labels(word.tail, word.labels[0])
    body = word.labels[1:-1]
    return {
        Word(word.start, word.end, (r, *body, algebra.unit), word.arrows): c
        for r, c in product.items()
    }


def rotate(M: Bimodule, word: Word, i: int) -> Word:
    """Rotation of a unit-tail cycle so that its i-th pair comes first."""
    pairs = word.pairs()
    rotated = pairs[i:] + pairs[:i]
    start = M.generator(rotated[0][1]).sigma
    return Word(
        start,
        start,
        (*(s for s, _ in rotated), M.species.unit(start)),
        tuple(a for _, a in rotated),
    )


def necklace_representative(M: Bimodule, word: Word) -> Word:
    """Least rotation of a unit-tail cycle under the word order."""
    return min(
        (rotate(M, word, i) for i in range(word.degree)), key=word_sort_key
    )


def necklace_class(word: Word) -> tuple[str, ...]:
    """Least rotation of the generator sequence; labels ignored."""
    arrows = word.arrows
    return min(arrows[i:] + arrows[:i] for i in range(len(arrows)))


def cyclic_normal_form(P: Series) -> Series:
    """
    Canonical representative of P modulo commutators.

    Non-cyclic words are commutators and vanish; degree-0 parts are reduced
    modulo [D, D] at each vertex.
    """
    M = P.bimodule
    terms: dict[Word, Scalar] = {}
    degree_zero: dict[Word, Scalar] = {}
    for word, coeff in P.items():
        if not word.is_cycle:
            continue
        if word.degree == 0:
            degree_zero[word] = coeff
            continue
        for unit_word, c in absorb_tail(M, word).items():
            rep = necklace_representative(M, unit_word)
            add_scaled(terms, {rep: c}, coeff)
    if degree_zero:
        add_scaled(terms, _reduce_degree_zero(M, degree_zero), 1)
    return Series(M, terms, P.degree)


def _reduce_degree_zero(M: Bimodule, terms: dict[Word, Scalar]) -> dict[Word, Scalar]:
    by_vertex: dict[int, dict[Word, Scalar]] = defaultdict(dict)
    for word, c in terms.items():
        by_vertex[word.start][word] = c
    result: dict[Word, Scalar] = {}
    for vertex, vector in by_vertex.items():
        basis = EchelonBasis(word_sort_key)
        basis.extend(_label_commutators(M, vertex))
        residual, _ = basis.reduce(vector)
        add_scaled(result, residual, 1)
    return result


def _label_commutators(M: Bimodule, vertex: int) -> Iterator[dict[Word, Scalar]]:
    labels = M.species.labels(vertex)
    for s, t in itertools.combinations(labels, 2):
        x, y = label_word(vertex, s), label_word(vertex, t)
        row = multiply_words(M, x, y)
        add_scaled(row, multiply_words(M, y, x), -1)
        if row:
            yield row


# =============================================================================
# Commutator span
# =============================================================================


def class_words(M: Bimodule, arrows: tuple[str, ...]) -> Iterator[Word]:
    """Every canonical cycle whose generator sequence is a rotation of arrows."""
    species = M.species
    seen = set()
    for i in range(len(arrows)):
        rotation = arrows[i:] + arrows[:i]
        if rotation in seen:
            continue
        seen.add(rotation)
        gens = [M.generator(a) for a in rotation]
        start = gens[0].sigma
        label_sets = [species.labels(g.sigma) for g in gens] + [species.labels(start)]
        for labels in itertools.product(*label_sets):
            yield Word(start, start, labels, rotation)


def commutator_rows(
    M: Bimodule, arrows: tuple[str, ...]
) -> Iterator[dict[Word, Scalar]]:
    """
    Spanning set of the commutators inside one necklace class.

    For each word x = (t1 a1) * rest: x - rest * (t1 a1), and for each label s
    at the start vertex: s x - x s.
    """
    species = M.species
    for word in class_words(M, arrows):
        first = Word(
            word.start,
            M.generator(word.arrows[0]).tau,
            (word.labels[0], species.unit(M.generator(word.arrows[0]).tau)),
            word.arrows[:1],
        )
        rest = Word(first.end, word.end, word.labels[1:], word.arrows[1:])
        row = {word: species.field.one}
        add_scaled(row, multiply_words(M, rest, first), -1)
        if row:
            yield row
        for s in species.labels(word.start):
            row = multiply_words(M, label_word(word.start, s), word)
            add_scaled(row, multiply_words(M, word, label_word(word.start, s)), -1)
            if row:
                yield row


def is_cyclically_equivalent(P: Series, Q: Series, degree: int | None = None) -> bool:
    """True iff P - Q lies in the commutator span in every degree <= N."""
    N = min(P.degree, Q.degree) if degree is None else degree
    M = P.bimodule
    difference = (P - Q).truncate(N)
    classes: dict[tuple[str, ...], dict[Word, Scalar]] = defaultdict(dict)
    scalars: dict[int, dict[Word, Scalar]] = defaultdict(dict)
    for word, coeff in difference.items():
        if not word.is_cycle:
            # e_i x - x e_i = x
            continue
        if word.degree == 0:
            scalars[word.start][word] = coeff
        else:
            classes[necklace_class(word)][word] = coeff
    for vertex, vector in scalars.items():
        basis = EchelonBasis(word_sort_key)
        basis.extend(_label_commutators(M, vertex))
        if not basis.contains(vector):
            return False
    for arrows, vector in classes.items():
        basis = EchelonBasis(word_sort_key)
        basis.extend(commutator_rows(M, arrows))
        if not basis.contains(vector):
            return False
    return True
