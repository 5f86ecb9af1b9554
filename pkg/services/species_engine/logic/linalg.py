"""
Exact sparse linear algebra.

Vectors are dicts ``column -> scalar`` with zero entries pruned. Columns are
any hashable keys (usually canonical words); the pivot of a row is its least
column under ``sort_key``, so with a degree-first key the basis is graded by
lowest degree.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Hashable, Iterable, Mapping
from fractions import Fraction
from typing import Any

from services.species_engine.logic.fields import Scalar

Vector = dict[Hashable, Scalar]


def add_scaled(target: dict, source: Mapping, factor: Any) -> None:
    """target += factor * source, in place, pruning zeros."""
    for col, val in source.items():
        new = target.get(col, 0) + factor * val
        if new:
            target[col] = new
        else:
            target.pop(col, None)


def scaled(source: Mapping, factor: Any) -> dict:
    if not factor:
        return {}
    return {col: factor * val for col, val in source.items() if factor * val}


class EchelonBasis:
    """
    Incremental reduced row-echelon basis.

    Every stored row has coefficient 1 at its pivot and 0 at every other
    pivot column. With ``track=True`` each row also remembers how it is
    combined from the tagged input vectors, which makes :meth:`express`
    available.
    """

    def __init__(
        self,
        sort_key: Callable[[Hashable], Any] | None = None,
        track: bool = False,
    ):
        self._key = sort_key or (lambda column: column)
        self._track = track
        self._rows: dict[Hashable, Vector] = {}
        self._combos: dict[Hashable, dict[Hashable, Scalar]] = {}

    # =========================================================================
    # Queries
    # =========================================================================

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def pivots(self) -> list[Hashable]:
        return sorted(self._rows, key=self._key)

    def rows(self) -> list[Vector]:
        return [dict(self._rows[p]) for p in self.pivots()]

    def pivot_counts(self, grade: Callable[[Hashable], Any]) -> Counter:
        """Number of pivots per value of ``grade(pivot)``."""
        return Counter(grade(p) for p in self._rows)

    def reduce(self, vector: Mapping) -> tuple[Vector, dict[Hashable, Scalar]]:
        """
        Reduce a vector against the basis.

        Returns:
            (residual, combination) with vector = residual + sum of
            combination[p] * row[p]. The combination is over pivots, or over
            input tags when tracking.
        """
        residual: Vector = {c: v for c, v in vector.items() if v}
        combination: dict[Hashable, Scalar] = {}
        for pivot in [c for c in residual if c in self._rows]:
            coeff = residual.get(pivot)
            if not coeff:
                continue
            add_scaled(residual, self._rows[pivot], -coeff)
            if self._track:
                add_scaled(combination, self._combos[pivot], coeff)
            else:
                combination[pivot] = coeff
        return residual, combination

    def contains(self, vector: Mapping) -> bool:
        residual, _ = self.reduce(vector)
        return not residual

    def express(self, vector: Mapping) -> dict[Hashable, Scalar] | None:
        """Coefficients over the tagged inputs, or None if outside the span."""
        if not self._track:
            raise RuntimeError("express() needs a tracking basis")
        residual, combination = self.reduce(vector)
        return None if residual else combination

    # =========================================================================
    # Updates
    # =========================================================================

    def add(self, vector: Mapping, tag: Hashable | None = None) -> bool:
        """Insert a vector; returns True when the rank grew."""
        residual, combination = self.reduce(vector)
        if not residual:
            return False
        pivot = min(residual, key=self._key)
        lead = residual[pivot]
        inverse = Fraction(1, lead) if isinstance(lead, int) else 1 / lead
        row = scaled(residual, inverse)
        combo: dict[Hashable, Scalar] = {}
        if self._track:
            combo = {c: -v for c, v in combination.items()}
            add_scaled(combo, {tag: 1}, 1)
            combo = scaled(combo, inverse)
        for other_pivot, other in self._rows.items():
            coeff = other.get(pivot)
            if coeff:
                add_scaled(other, row, -coeff)
                if self._track:
                    add_scaled(self._combos[other_pivot], combo, -coeff)
        self._rows[pivot] = row
        if self._track:
            self._combos[pivot] = combo
        return True

    def extend(self, vectors: Iterable[Mapping]) -> int:
        """Insert several vectors; returns the rank increment."""
        before = self.rank
        for vector in vectors:
            self.add(vector)
        return self.rank - before

    def copy(self) -> EchelonBasis:
        clone = EchelonBasis(self._key, self._track)
        clone._rows = {p: dict(r) for p, r in self._rows.items()}
        clone._combos = {p: dict(c) for p, c in self._combos.items()}
        return clone


def rank_of(vectors: Iterable[Mapping], sort_key: Callable | None = None) -> int:
    basis = EchelonBasis(sort_key)
    basis.extend(vectors)
    return basis.rank
