import random

import pytest

from common.errors import ErrorCodes
from common.exceptions import PreconditionError, SearchExhausted, ValidationError
from services.species_engine.logic.bimodule import Species, build_bimodule
from services.species_engine.logic.fields import PrimeField
from services.species_engine.logic.presets import rational
from services.species_engine.pipeline.search import (
    random_potential,
    run_sequence,
    search_nondegenerate,
)


def test_empty_sequence_returns_zero(cycle3):
    result = search_nondegenerate(cycle3, [], trials=5, seed=1, degree=4)
    assert result.potential.is_zero()
    assert result.trial == 0
    assert result.matrices == [[[0, 1, -1], [-1, 0, 1], [1, -1, 0]]]


def test_three_cycle_sequence(cycle3):
    result = search_nondegenerate(
        cycle3, [2, 1, 3], trials=50, seed=42, pool=[-2, -1, 0, 1, 2], degree=4
    )
    assert result.fz_coherent
    assert len(result.matrices) == 4
    assert result.matrices[1] == [[0, -1, 0], [1, 0, -1], [0, 1, 0]]
    assert not result.potential.is_zero()


def test_search_is_deterministic(cycle3):
    runs = [
        search_nondegenerate(cycle3, [2], trials=20, seed=5, pool=[0, 1], degree=4)
        for _ in range(2)
    ]
    assert runs[0].trial == runs[1].trial
    assert runs[0].potential == runs[1].potential


def test_parallel_search_finds_the_same_witness(cycle3):
    kwargs = dict(trials=20, seed=5, pool=[0, 1], degree=4)
    serial = search_nondegenerate(cycle3, [2, 1], workers=1, **kwargs)
    parallel = search_nondegenerate(cycle3, [2, 1], workers=2, **kwargs)
    assert serial.trial == parallel.trial
    assert serial.potential == parallel.potential


def test_exhausted_search_reports_statistics(cycle3):
    with pytest.raises(SearchExhausted) as exc:
        search_nondegenerate(cycle3, [2], trials=3, seed=0, pool=[0], degree=4)
    statistics = exc.value.details["statistics"]
    assert statistics[0]["vertex"] == 2
    assert statistics[0]["not_maximal"] == 3
    assert exc.value.exit_code == 2


def test_random_potential_uses_the_pool(cycle3):
    P = random_potential(cycle3, 6, [3], random.Random(0))
    assert sorted(c for _, c in P.items()) == [3, 3]
    assert {w.degree for w, _ in P.items()} == {3, 6}


def test_zero_potential_fails_at_the_first_step(cycle3):
    P = random_potential(cycle3, 4, [0], random.Random(0))
    step, reason, visited = run_sequence(cycle3, P, [2], 4)
    assert (step, reason) == (0, "not_maximal")
    assert visited == [cycle3]


def test_finite_fields_are_rejected():
    F = PrimeField(5)
    species = Species((rational(F), rational(F)))
    M = build_bimodule(species, [("a", 1, 2)])
    with pytest.raises(PreconditionError) as exc:
        search_nondegenerate(M, [1])
    assert exc.value.code == ErrorCodes.INFINITE_FIELD_REQUIRED


def test_two_cycles_are_rejected(sqrt2_species):
    with pytest.raises(PreconditionError) as exc:
        search_nondegenerate(sqrt2_species, [1])
    assert exc.value.code == ErrorCodes.MUTATION_UNDEFINED


def test_vertex_out_of_range(cycle3):
    with pytest.raises(ValidationError) as exc:
        search_nondegenerate(cycle3, [4])
    assert exc.value.details["path"] == "seq"
