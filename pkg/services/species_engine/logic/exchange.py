"""
Exchange matrices.

B(M) has entries b_ij = (m(i, j) - m(j, i)) * d(j) and is skew-symmetrizable
by diag(d). Vertices are 1-based in the public API, 0-based inside numpy.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.logic.bimodule import (
    Bimodule,
    Generator,
    Species,
    build_bimodule,
)
from services.species_engine.logic.division_algebra import DivisionAlgebra


@dataclass(frozen=True, eq=False)
class ExchangeMatrix:
    """Integer matrix B with its skew-symmetrizer (d_1, ..., d_n)."""

    matrix: np.ndarray
    symmetrizer: tuple[int, ...]

    def __post_init__(self) -> None:
        B = np.array(self.matrix, dtype=np.int64)
        n = len(self.symmetrizer)
        if B.shape != (n, n):
            raise ValidationError(
                ErrorCodes.INVALID_INPUT,
                f"matrix shape {B.shape} does not match symmetrizer of length {n}",
            )
        if not is_skew_symmetrizable(B, self.symmetrizer):
            raise ValidationError(
                ErrorCodes.NOT_SKEW_SYMMETRIZABLE,
                f"matrix is not skew-symmetrizable by diag{self.symmetrizer}",
            )
        B.setflags(write=False)
        object.__setattr__(self, "matrix", B)

    @property
    def n(self) -> int:
        return len(self.symmetrizer)

    def entry(self, i: int, j: int) -> int:
        return int(self.matrix[i - 1, j - 1])

    def to_list(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.matrix]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExchangeMatrix):
            return NotImplemented
        return self.symmetrizer == other.symmetrizer and np.array_equal(
            self.matrix, other.matrix
        )

    def __hash__(self) -> int:
        return hash((self.symmetrizer, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"ExchangeMatrix({self.to_list()}, d={self.symmetrizer})"


def is_skew_symmetrizable(B: np.ndarray, d: Sequence[int]) -> bool:
    """True if diag(d) @ B is skew-symmetric."""
    DB = np.diag(np.asarray(d, dtype=np.int64)) @ np.asarray(B, dtype=np.int64)
    return bool(np.array_equal(DB, -DB.T))


def exchange_matrix(M: Bimodule) -> ExchangeMatrix:
    species = M.species
    n = species.n
    counts = np.zeros((n, n), dtype=np.int64)
    for g in M.generators:
        counts[g.sigma - 1, g.tau - 1] += 1
    d = np.asarray(species.dims, dtype=np.int64)
    B = (counts - counts.T) * d[np.newaxis, :]
    return ExchangeMatrix(B, species.dims)


def fz_mutate(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Fomin-Zelevinsky mutation at the 1-based vertex k."""
    if not 1 <= k <= B.n:
        raise ValidationError(
            ErrorCodes.INVALID_INPUT, f"vertex {k} out of range 1..{B.n}"
        )
    old = B.matrix
    c = k - 1
    new = old.copy()
    for i in range(B.n):
        for j in range(B.n):
            if i == c or j == c:
                new[i, j] = -old[i, j]
            elif old[i, c] * old[c, j] > 0:
                sign = 1 if old[i, c] > 0 else -1
                new[i, j] = old[i, j] + sign * old[i, c] * old[c, j]
    return ExchangeMatrix(new, B.symmetrizer)


def species_from_matrix(
    B: np.ndarray | Sequence[Sequence[int]], tables: Sequence[DivisionAlgebra]
) -> tuple[Species, Bimodule]:
    """
    Species with the given tables and a bimodule realizing B.

    Raises:
        ValidationError: B is not skew-symmetrizable by the table dimensions,
            or some d(j) does not divide b_ij.
    """
    species = Species(tuple(tables))
    raw = np.asarray(B, dtype=np.int64)
    if raw.shape != (species.n, species.n):
        raise ValidationError(
            ErrorCodes.INVALID_INPUT,
            f"matrix shape {raw.shape} does not match {species.n} tables",
        )
    arrows: list[Generator] = []
    for i in species.vertices:
        for j in species.vertices:
            b = int(raw[i - 1, j - 1])
            if b <= 0:
                continue
            dj = species.dim(j)
            if b % dj:
                raise ValidationError(
                    ErrorCodes.DIVISIBILITY,
                    f"d({j}) = {dj} does not divide b_{i}{j} = {b}",
                )
            count = b // dj
            for r in range(1, count + 1):
                name = f"x{i}_{j}" if count == 1 else f"x{i}_{j}_{r}"
                arrows.append(Generator(name, i, j))
    target = ExchangeMatrix(raw, species.dims)
    M = build_bimodule(species, arrows)
    if exchange_matrix(M) != target:
        raise ValidationError(
            ErrorCodes.NOT_SKEW_SYMMETRIZABLE,
            "matrix cannot be realized over the given tables",
        )
    return species, M
