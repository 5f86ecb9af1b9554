"""
Cyclic derivatives.

Functionals are right S-linear maps psi: M -> S, stored by their values on
the special basis {s a}. psi_* extends psi to words by acting on the first
(label, generator) pair:

    psi_*(t1 a1 t2 a2 ... tm am t) = psi(t1 a1) t2 a2 ... am t

and the cyclic derivative with respect to psi is delta_psi(P) = psi_*(delta(P)).
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Any

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.logic.bimodule import Bimodule
from services.species_engine.logic.cyclic import absorb_tail, rotate
from services.species_engine.logic.division_algebra import AlgebraElement
from services.species_engine.logic.fields import Scalar
from services.species_engine.logic.linalg import add_scaled
from services.species_engine.logic.series import (
    Series,
    Word,
    label_word,
    multiply_words,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Functional:
    """
    psi in Hom_S(M_S, S_S), given by psi(s a) in D_tau(a) for the special basis.

    Missing keys are zero.
    """

    bimodule: Bimodule
    values: Mapping[tuple[str, str], AlgebraElement]

    def __post_init__(self) -> None:
        species = self.bimodule.species
        clean = {}
        for (s, a), value in self.values.items():
            gen = self.bimodule.generator(a)
            if s not in species.labels(gen.sigma):
                raise ValidationError(
                    ErrorCodes.UNKNOWN_LABEL,
                    f"{s} is not a label at vertex {gen.sigma}",
                )
            algebra = species.algebra(gen.tau)
            element = algebra.element(value)
            if element:
                clean[s, a] = element
        object.__setattr__(self, "values", clean)

    @classmethod
    def dual(cls, M: Bimodule, a: str, s: str | None = None) -> Functional:
        """(s a)*: 1 on s a, 0 on every other special basis element."""
        gen = M.generator(a)
        s = M.species.unit(gen.sigma) if s is None else s
        return cls(M, {(s, a): {M.species.unit(gen.tau): 1}})

    @classmethod
    def zero(cls, M: Bimodule) -> Functional:
        return cls(M, {})

    def value(self, s: str, a: str) -> AlgebraElement:
        return dict(self.values.get((s, a), {}))

    def right_mul(self, vertex: int, x: Mapping[str, Any]) -> Functional:
        """(psi x)(m) = psi(x m) for x in D_vertex."""
        M = self.bimodule
        algebra = M.species.algebra(vertex)
        x = algebra.element(x)
        values: dict[tuple[str, str], AlgebraElement] = {}
        for gen in M.out_of(vertex):
            for s in algebra.basis:
                acc: AlgebraElement = {}
                for r, c in algebra.mul(x, {s: 1}).items():
                    add_scaled(acc, self.values.get((r, gen.name), {}), c)
                if acc:
                    values[s, gen.name] = acc
        return Functional(M, values)

    def left_mul(self, vertex: int, x: Mapping[str, Any]) -> Functional:
        """(x psi)(m) = x psi(m) for x in D_vertex."""
        M = self.bimodule
        algebra = M.species.algebra(vertex)
        x = algebra.element(x)
        values = {
            (s, a): algebra.mul(x, value)
            for (s, a), value in self.values.items()
            if M.generator(a).tau == vertex
        }
        return Functional(M, values)

    def __add__(self, other: Functional) -> Functional:
        values = {k: dict(v) for k, v in self.values.items()}
        for key, value in other.values.items():
            add_scaled(values.setdefault(key, {}), value, 1)
        return Functional(self.bimodule, values)

    def scale(self, factor: Any) -> Functional:
        c = self.bimodule.species.field.coerce(factor)
        return Functional(
            self.bimodule,
            {
                k: {t: c * v for t, v in value.items()}
                for k, value in self.values.items()
            },
        )

    def is_zero(self) -> bool:
        return not self.values

    def __repr__(self) -> str:
        return f"Functional({dict(self.values)})"


# =============================================================================
# Cyclic derivative
# =============================================================================


def delta(P: Series, strict: bool = True) -> Series:
    """
    Full cyclic derivative: the sum of all rotations at generator boundaries.

    Degree-0 terms map to 0. With ``strict=False`` non-cyclic words are
    dropped first (delta(x) = delta(x_cyc)).

    Raises:
        ValidationError: P has a non-cyclic word and ``strict`` is set.
    """
    M = P.bimodule
    terms: dict[Word, Scalar] = {}
    for word, coeff in P.items():
        if not word.is_cycle:
            if strict:
                raise ValidationError(
                    ErrorCodes.NON_CYCLIC,
                    f"potential has a non-cyclic term {word.text()}",
                )
            continue
        if word.degree == 0:
            continue
        for unit_word, c in absorb_tail(M, word).items():
            for i in range(unit_word.degree):
                add_scaled(terms, {rotate(M, unit_word, i): c}, coeff)
    return Series(M, terms, P.degree)


def _split_first(M: Bimodule, word: Word) -> tuple[str, str, Word]:
    """(t1, a1, rest) for t1 a1 * rest."""
    a = word.arrows[0]
    rest = Word(M.generator(a).tau, word.end, word.labels[1:], word.arrows[1:])
    return word.labels[0], a, rest


def _apply_psi(psi: Functional, derivative: Series) -> Series:
    M = derivative.bimodule
    terms: dict[Word, Scalar] = {}
    for word, coeff in derivative.items():
        if word.degree == 0:
            continue
        t1, a, rest = _split_first(M, word)
        value = psi.values.get((t1, a))
        if not value:
            continue
        for r, c in value.items():
            product = multiply_words(M, label_word(rest.start, r), rest)
            add_scaled(terms, product, coeff * c)
    return Series(M, terms, max(derivative.degree - 1, 0))


def delta_psi(P: Series, psi: Functional, strict: bool = True) -> Series:
    """delta_psi(P) = psi_*(delta(P)); every term loses exactly one degree."""
    if psi.bimodule != P.bimodule:
        raise ValidationError(
            ErrorCodes.BIMODULE_MISMATCH, "functional and potential differ in bimodule"
        )
    return _apply_psi(psi, delta(P, strict))


def x_gen(P: Series, a: str, derivative: Series | None = None) -> Series:
    """
    X_{a*}(P) = sum over s in L(sigma(a)) of delta_{(s a)*}(P) s.

    Every rotation t1 a * rest of delta(P) contributes rest * t1.
    """
    M = P.bimodule
    gen = M.generator(a)
    derivative = delta(P) if derivative is None else derivative
    terms: dict[Word, Scalar] = {}
    for word, coeff in derivative.items():
        if word.degree == 0 or word.arrows[0] != a:
            continue
        t1, _, rest = _split_first(M, word)
        add_scaled(terms, multiply_words(M, rest, label_word(gen.sigma, t1)), coeff)
    return Series(M, terms, max(derivative.degree - 1, 0))


def x_map(P: Series, psi: Functional, derivative: Series | None = None) -> Series:
    """X^P(psi) = sum over vertices i and w in L(i) of delta_{psi w^-1}(P) w."""
    M = P.bimodule
    species = M.species
    derivative = delta(P) if derivative is None else derivative
    pieces = []
    for i in species.vertices:
        algebra = species.algebra(i)
        for w in algebra.basis:
            shifted = psi.right_mul(i, algebra.inv_basis(w))
            if shifted.is_zero():
                continue
            pieces.append(_apply_psi(shifted, derivative).right_label(i, w))
    total = Series.zero(M, max(derivative.degree - 1, 0))
    for piece in pieces:
        total = total + piece
    return total


# =============================================================================
# Ideal generators
# =============================================================================


def jacobian_generators(P: Series) -> list[Series]:
    """delta_{(s a)*}(P) over the dual special basis; they generate J(P)."""
    M = P.bimodule
    derivative = delta(P)
    return [
        _apply_psi(Functional.dual(M, a, s), derivative) for s, a in M.right_basis()
    ]


def r_generators(P: Series) -> list[Series]:
    """X_{a*}(P) for every generator a; they generate R(P)."""
    derivative = delta(P)
    return [x_gen(P, a, derivative) for a in P.bimodule.names]


def functional_sum(items: Iterable[Functional], M: Bimodule) -> Functional:
    total = Functional.zero(M)
    for item in items:
        total = total + item
    return total
