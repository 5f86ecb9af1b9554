import numpy as np
import pytest

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.logic.exchange import (
    ExchangeMatrix,
    exchange_matrix,
    fz_mutate,
    species_from_matrix,
)
from services.species_engine.logic.presets import quadratic, rational


def random_exchange_matrix(rng: np.random.Generator) -> ExchangeMatrix:
    n = int(rng.integers(2, 6))
    d = rng.choice([1, 2, 4], size=n)
    upper = np.triu(rng.integers(-3, 4, size=(n, n)), 1)
    skew = upper - upper.T
    return ExchangeMatrix(skew * d[np.newaxis, :], tuple(int(x) for x in d))


def test_fz_mutation_is_an_involution():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        B = random_exchange_matrix(rng)
        k = int(rng.integers(1, B.n + 1))
        assert fz_mutate(fz_mutate(B, k), k) == B


def test_three_cycle_matrix(cycle3):
    B = exchange_matrix(cycle3)
    assert B.to_list() == [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
    assert fz_mutate(B, 2).to_list() == [[0, -1, 0], [1, 0, -1], [0, 1, 0]]


def test_matrix_with_a_quadratic_vertex(sqrt2_cycle3):
    B = exchange_matrix(sqrt2_cycle3)
    assert B.to_list() == [[0, 2, -1], [-1, 0, 1], [1, -2, 0]]
    assert B.symmetrizer == (1, 2, 1)


def test_species_from_matrix_picks_one_direction():
    species, M = species_from_matrix([[0, 2], [-1, 0]], [rational(), quadratic(2)])
    assert M.multiplicity(1, 2) == 1
    assert M.multiplicity(2, 1) == 0
    assert exchange_matrix(M).to_list() == [[0, 2], [-1, 0]]
    assert species.dims == (1, 2)


def test_species_from_matrix_divisibility():
    with pytest.raises(ValidationError) as exc:
        species_from_matrix([[0, 1], [-2, 0]], [rational(), quadratic(2)])
    assert exc.value.code == ErrorCodes.DIVISIBILITY


def test_non_skew_symmetrizable():
    with pytest.raises(ValidationError) as exc:
        ExchangeMatrix([[0, 1], [1, 0]], (1, 1))
    assert exc.value.code == ErrorCodes.NOT_SKEW_SYMMETRIZABLE


def test_vertex_out_of_range(cycle3):
    with pytest.raises(ValidationError):
        fz_mutate(exchange_matrix(cycle3), 4)
