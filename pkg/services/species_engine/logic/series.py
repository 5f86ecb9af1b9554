"""
Truncated elements of the complete tensor algebra F_S(M).

A canonical word t1 a1 t2 a2 ... tm am t(m+1) keeps one basis label before
every generator plus a tail label; degree-0 words are single labels at a
vertex. Products of labels are re-expanded through the structure constants,
so a Series is a finite dict word -> scalar with every word of degree <= N.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from types import MappingProxyType
from typing import Any, NamedTuple

from common.errors import ErrorCodes
from common.exceptions import NotFoundError, ValidationError
from services.species_engine.logic.bimodule import Bimodule
from services.species_engine.logic.fields import Scalar
from services.species_engine.logic.linalg import add_scaled


class Word(NamedTuple):
    """Canonical monomial from vertex start to vertex end."""

    start: int
    end: int
    labels: tuple[str, ...]
    arrows: tuple[str, ...] = ()

    @property
    def degree(self) -> int:
        return len(self.arrows)

    @property
    def tail(self) -> str:
        return self.labels[-1]

    @property
    def is_cycle(self) -> bool:
        return self.start == self.end

    def pairs(self) -> tuple[tuple[str, str], ...]:
        """(label, generator) pairs, tail excluded."""
        return tuple(zip(self.labels, self.arrows, strict=False))

    def text(self) -> str:
        parts = []
        for label, arrow in zip(self.labels, self.arrows, strict=False):
            parts.append(arrow if label == "1" else f"{label}.{arrow}")
        if self.tail != "1" or not self.arrows:
            parts.append(self.tail if self.arrows else f"{self.tail}@{self.start}")
        return " ".join(parts)


def word_sort_key(word: Word) -> tuple:
    """Degree first, then (generator, label) pairs, then tail and start."""
    return (
        word.degree,
        tuple((a, s) for s, a in word.pairs()),
        word.tail,
        word.start,
    )


def label_word(vertex: int, label: str) -> Word:
    return Word(vertex, vertex, (label,), ())


def multiply_words(M: Bimodule, u: Word, v: Word) -> dict[Word, Scalar]:
    """u * v expanded over canonical words; empty when u.end != v.start."""
    if u.end != v.start:
        return {}
    middle = M.species.algebra(u.end).mul_labels(u.tail, v.labels[0])
    head, rest = u.labels[:-1], v.labels[1:]
    arrows = u.arrows + v.arrows
    return {
        Word(u.start, v.end, (*head, r, *rest), arrows): c for r, c in middle.items()
    }


class Series:
    """
    Truncated series over a bimodule.

    Values are immutable; arithmetic returns new series. Every stored word
    has degree <= degree (the truncation N) and a nonzero coefficient.
    """

    __slots__ = ("bimodule", "degree", "_terms")

    def __init__(
        self,
        bimodule: Bimodule,
        terms: Mapping[Word, Scalar] | Iterable[tuple[Word, Scalar]],
        degree: int,
    ):
        if degree < 0:
            raise ValidationError(ErrorCodes.INVALID_INPUT, "truncation must be >= 0")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Word, Scalar] = {}
        for word, coeff in items:
            if word.degree > degree:
                continue
            new = clean.get(word, 0) + coeff
            if new:
                clean[word] = new
            else:
                clean.pop(word, None)
        self.bimodule = bimodule
        self.degree = degree
        self._terms = clean

    # =========================================================================
    # Constructors
    # =========================================================================

    @classmethod
    def zero(cls, M: Bimodule, degree: int) -> Series:
        return cls(M, {}, degree)

    @classmethod
    def scalar(
        cls,
        M: Bimodule,
        vertex: int,
        element: str | Mapping[str, Any],
        degree: int,
    ) -> Series:
        """An element of D_vertex, given as a label or a label -> coeff map."""
        algebra = M.species.algebra(vertex)
        coeffs = {element: 1} if isinstance(element, str) else element
        terms = {}
        for label, c in coeffs.items():
            if label not in algebra.basis:
                raise NotFoundError("label", f"{label}@{vertex}")
            terms[label_word(vertex, label)] = algebra.field.coerce(c)
        return cls(M, terms, degree)

    @classmethod
    def unit(cls, M: Bimodule, degree: int) -> Series:
        """1 = e_1 + ... + e_n."""
        one = M.species.field.one
        return cls(
            M,
            {label_word(v, M.species.unit(v)): one for v in M.species.vertices},
            degree,
        )

    @classmethod
    def monomial(
        cls,
        M: Bimodule,
        pairs: Sequence[tuple[str, str]],
        tail: str | None = None,
        coeff: Any = 1,
        degree: int = 8,
    ) -> Series:
        """One canonical word from (label, generator) pairs and a tail label."""
        if not pairs:
            raise ValidationError(
                ErrorCodes.INVALID_INPUT, "monomial needs a generator"
            )
        species = M.species
        gens = [M.generator(a) for _, a in pairs]
        for (label, _), gen in zip(pairs, gens, strict=True):
            if label not in species.labels(gen.sigma):
                raise NotFoundError("label", f"{label}@{gen.sigma}")
        for left, right in zip(gens, gens[1:], strict=False):
            if left.tau != right.sigma:
                raise ValidationError(
                    ErrorCodes.NOT_COMPOSABLE,
                    f"{left.name} {right.name} not composable",
                )
        end = gens[-1].tau
        tail = species.unit(end) if tail is None else tail
        if tail not in species.labels(end):
            raise NotFoundError("label", f"{tail}@{end}")
        word = Word(
            gens[0].sigma,
            end,
            (*(label for label, _ in pairs), tail),
            tuple(a for _, a in pairs),
        )
        return cls(M, {word: species.field.coerce(coeff)}, degree)

    @classmethod
    def path(
        cls, M: Bimodule, names: Sequence[str] | str, degree: int = 8, coeff: Any = 1
    ) -> Series:
        """Product of generators with unit labels, e.g. path(M, "a b c")."""
        if isinstance(names, str):
            names = names.split()
        pairs = [(M.species.unit(M.generator(a).sigma), a) for a in names]
        return cls.monomial(M, pairs, None, coeff, degree)

    # =========================================================================
    # Accessors
    # =========================================================================

    @property
    def terms(self) -> Mapping[Word, Scalar]:
        return MappingProxyType(self._terms)

    @property
    def field(self):
        return self.bimodule.species.field

    def items(self):
        return self._terms.items()

    def sorted_terms(self) -> list[tuple[Word, Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: word_sort_key(kv[0]))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, word: Word) -> Scalar:
        return self._terms.get(word, self.field.zero)

    def valuation(self) -> int | None:
        """Least degree with a nonzero term, None for zero."""
        return min((w.degree for w in self._terms), default=None)

    def by_degree(self) -> dict[int, dict[Word, Scalar]]:
        graded: dict[int, dict[Word, Scalar]] = defaultdict(dict)
        for word, coeff in self._terms.items():
            graded[word.degree][word] = coeff
        return dict(graded)

    def generators_used(self) -> set[str]:
        return {a for w in self._terms for a in w.arrows}

    def is_cyclic(self) -> bool:
        return all(w.is_cycle for w in self._terms)

    # =========================================================================
    # Arithmetic
    # =========================================================================

    def _check(self, other: Series) -> None:
        if self.bimodule != other.bimodule:
            raise ValidationError(
                ErrorCodes.BIMODULE_MISMATCH, "series live over different bimodules"
            )

    def __add__(self, other: Series) -> Series:
        self._check(other)
        terms = dict(self._terms)
        add_scaled(terms, other._terms, 1)
        return Series(self.bimodule, terms, min(self.degree, other.degree))

    def __sub__(self, other: Series) -> Series:
        self._check(other)
        terms = dict(self._terms)
        add_scaled(terms, other._terms, -1)
        return Series(self.bimodule, terms, min(self.degree, other.degree))

    def __neg__(self) -> Series:
        return self.scale(-1)

    def scale(self, factor: Any) -> Series:
        c = self.field.coerce(factor)
        return Series(
            self.bimodule, {w: c * v for w, v in self._terms.items()}, self.degree
        )

    def __mul__(self, other: Series) -> Series:
        return mul_series(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.bimodule == other.bimodule and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def truncate(self, m: int) -> Series:
        return truncate(self, m)

    def homogeneous(self, d: int) -> Series:
        """Degree-d component."""
        return Series(
            self.bimodule,
            {w: c for w, c in self._terms.items() if w.degree == d},
            self.degree,
        )

    def part(self, low: int, high: int | None = None) -> Series:
        """Components of degree low..high."""
        high = self.degree if high is None else high
        return Series(
            self.bimodule,
            {w: c for w, c in self._terms.items() if low <= w.degree <= high},
            self.degree,
        )

    def with_degree(self, degree: int) -> Series:
        return Series(self.bimodule, self._terms, degree)

    def rehome(self, M: Bimodule) -> Series:
        """Same words over another bimodule containing every used generator."""
        for name in self.generators_used():
            gen, new = self.bimodule.generator(name), M.generator(name)
            if (gen.sigma, gen.tau) != (new.sigma, new.tau):
                raise ValidationError(
                    ErrorCodes.BIMODULE_MISMATCH, f"generator {name} changes blocks"
                )
        return Series(M, self._terms, self.degree)

    def rename(self, target: Bimodule, mapping: Mapping[str, str]) -> Series:
        """Same words over target, generator names translated through mapping."""
        for name in mapping.values():
            target.generator(name)
        terms: dict[Word, Scalar] = {}
        for w, c in self._terms.items():
            arrows = tuple(mapping[a] for a in w.arrows)
            add_scaled(terms, {Word(w.start, w.end, w.labels, arrows): c}, 1)
        return Series(target, terms, self.degree)

    def left_label(self, vertex: int, label: str) -> Series:
        """s * self for a basis label s at vertex."""
        scalar = Series.scalar(self.bimodule, vertex, label, self.degree)
        return mul_series(scalar, self)

    def right_label(self, vertex: int, label: str) -> Series:
        """self * s for a basis label s at vertex."""
        scalar = Series.scalar(self.bimodule, vertex, label, self.degree)
        return mul_series(self, scalar)

    def text(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"{self.field.format(c)}*({w.text()})" for w, c in self.sorted_terms()
        )

    def __repr__(self) -> str:
        return f"Series[N={self.degree}]({self.text()})"


# =============================================================================
# Operations
# =============================================================================


def mul_series(f: Series, g: Series, degree: int | None = None) -> Series:
    """Graded product truncated at min(degree, truncations of f and g)."""
    f._check(g)
    N = min(f.degree, g.degree) if degree is None else min(degree, f.degree, g.degree)
    M = f.bimodule
    result: dict[Word, Scalar] = {}
    right_by_start: dict[int, list[tuple[Word, Scalar]]] = defaultdict(list)
    for v, cv in g.items():
        right_by_start[v.start].append((v, cv))
    for u, cu in f.items():
        budget = N - u.degree
        if budget < 0:
            continue
        for v, cv in right_by_start.get(u.end, ()):
            if v.degree > budget:
                continue
            add_scaled(result, multiply_words(M, u, v), cu * cv)
    return Series(M, result, N)


def truncate(h: Series, m: int) -> Series:
    """h^{<= m}; the truncation degree becomes min(m, h.degree)."""
    m = min(m, h.degree)
    return Series(h.bimodule, {w: c for w, c in h.items() if w.degree <= m}, m)


def cyclic_part(h: Series) -> Series:
    """Sum over j of e_j h e_j."""
    return Series(h.bimodule, {w: c for w, c in h.items() if w.is_cycle}, h.degree)


def sum_series(items: Iterable[Series], M: Bimodule, degree: int) -> Series:
    terms: dict[Word, Scalar] = {}
    for s in items:
        add_scaled(terms, s._terms, 1)
        degree = min(degree, s.degree)
    return Series(M, terms, degree)
