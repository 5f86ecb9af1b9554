import pytest

from services.species_engine.logic.series import Series
from services.species_engine.pipeline.involution import (
    double_mutation_compare,
    identify_generators,
    invariants,
    proportionality,
)


def test_three_cycle_comes_back(cycle3, cycle3_potential):
    report = double_mutation_compare(cycle3, cycle3_potential, 2)

    assert report.identification == {"[b**a]": "c", "(*a)*": "a", "*(b*)": "b"}
    assert report.identification_complete
    assert report.invariants_match
    assert report.certificate == {
        "renaming": {"[b**a]": "c", "(*a)*": "a", "*(b*)": "b"},
        "lambda": "1",
    }
    assert all(report.double_premutation["matches"].values())
    assert len(report.trace) == 2


@pytest.mark.parametrize("k", [1, 2, 3])
def test_invariants_survive_two_mutations(cycle3, k):
    P = Series.path(cycle3, "a b c", 6) + Series.path(cycle3, "a b c a b c", 6)
    report = double_mutation_compare(cycle3, P, k)
    assert report.identification_complete
    assert report.invariants_match


def test_quadratic_middle_vertex(sqrt2_cycle3):
    P = Series.path(sqrt2_cycle3, "a b c", 6)
    report = double_mutation_compare(sqrt2_cycle3, P, 2, degree=5)
    assert report.degree == 5
    assert report.identification_complete
    assert report.matches["exchange_matrix"]
    assert report.invariants_match


def test_invariants_of_the_three_cycle(cycle3, cycle3_potential):
    inv = invariants(cycle3, cycle3_potential, 4)
    assert inv.exchange_matrix == [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
    assert inv.quotient_dims == [3, 3, 0, 0, 0]
    assert inv.def_dims == [0, 0, 0, 0, 0]
    assert all(inv.matches(inv).values())


def test_unchanged_generators_map_to_themselves(cycle3):
    assert identify_generators(cycle3, cycle3, cycle3) == {
        "a": "a",
        "b": "b",
        "c": "c",
    }


def test_proportionality(cycle3, cycle3_potential):
    assert proportionality(cycle3_potential.scale(3), cycle3_potential) == 3
    other = cycle3_potential + Series.path(cycle3, "a b c a b c", 6)
    assert proportionality(other, cycle3_potential) is None
    zero = Series.zero(cycle3, 6)
    assert proportionality(zero, zero) == 1
