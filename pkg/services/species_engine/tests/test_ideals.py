import pytest

from services.species_engine.logic.ideals import (
    count_words,
    def_space_dims,
    enumerate_words,
    necklace_counts,
    necklace_representatives,
    quotient_dim,
)
from services.species_engine.logic.mutation import mutate, premutate
from services.species_engine.logic.seeds import seed_potential
from services.species_engine.logic.series import Series


def test_three_cycle_quotients(cycle3, cycle3_potential):
    R = quotient_dim(cycle3, cycle3_potential, "R", 4)
    assert R.per_degree == [3, 3, 0, 0, 0]
    assert R.total == 6
    assert R.stabilized

    J = quotient_dim(cycle3, cycle3_potential, "J", 4)
    assert J.per_degree == R.per_degree


def test_corner_away_from_a_vertex(cycle3, cycle3_potential):
    corner = quotient_dim(cycle3, cycle3_potential, "R", 4, exclude_vertex=2)
    assert corner.per_degree == [2, 1, 0, 0, 0]
    assert corner.exclude_vertex == 2


def test_zero_potential_counts_every_word(cycle3):
    zero = Series.zero(cycle3, 3)
    dims = quotient_dim(cycle3, zero, "R", 3)
    assert dims.per_degree == [3, 3, 3, 3]
    assert not dims.stabilized


def test_word_counts_match_enumeration(sqrt2_species):
    counts = count_words(sqrt2_species, 3)
    for d in range(4):
        listed = [w for w in enumerate_words(sqrt2_species, 3) if w.degree == d]
        assert int(counts[d].sum()) == len(listed)


def test_necklaces_of_the_three_cycle(cycle3):
    assert necklace_counts(cycle3, 6) == [0, 0, 0, 1, 0, 0, 1]
    reps = necklace_representatives(cycle3, 3)
    assert [w.arrows for w in reps] == [("a", "b", "c")]


def test_def_space_vanishes_for_the_three_cycle(cycle3, cycle3_potential):
    dims = def_space_dims(cycle3, cycle3_potential, 4)
    assert dims.per_degree == [0, 0, 0, 0, 0]
    assert dims.total == 0


def test_def_space_of_zero_potential_counts_necklaces(cycle3):
    dims = def_space_dims(cycle3, Series.zero(cycle3, 6))
    assert dims.per_degree == necklace_counts(cycle3, 6)


CORNER_SPECIES = ["cycle3", "sqrt2_cycle3", "quaternion_cycle3", "sqrt2_end_cycle3"]


@pytest.fixture(params=CORNER_SPECIES)
def seeded(request):
    """A species and, per vertex k, seed_potential(k) + abcabc at degree 6."""
    M = request.getfixturevalue(request.param)

    def _potential(k):
        return seed_potential(M, k, 6) + Series.path(M, "a b c a b c", 6)

    return M, _potential


@pytest.mark.parametrize("k", [1, 2, 3])
def test_corner_survives_premutation(cycle3, cycle3_potential, k):
    before = quotient_dim(cycle3, cycle3_potential, "R", 6, exclude_vertex=k)
    pre = premutate(cycle3, cycle3_potential, k, 6)
    after = quotient_dim(pre.bimodule, pre.potential, "R", 6, exclude_vertex=k)
    assert before.stabilized and after.stabilized
    assert before.total == after.total


@pytest.mark.parametrize("k", [1, 2, 3])
def test_corner_survives_mutation(seeded, k):
    M, potential = seeded
    P = potential(k)
    before = quotient_dim(M, P, "R", 6, exclude_vertex=k)
    outcome = mutate(M, P, k)
    after = quotient_dim(outcome.bimodule, outcome.potential, "R", 6, exclude_vertex=k)
    assert before.total == after.total


@pytest.mark.parametrize("k", [1, 2, 3])
def test_def_space_survives_mutation(seeded, k):
    M, potential = seeded
    P = potential(k)
    outcome = mutate(M, P, k)
    before = def_space_dims(M, P, 6)
    after = def_space_dims(outcome.bimodule, outcome.potential, 6)
    assert before.total == after.total
