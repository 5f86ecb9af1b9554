import random

import pytest

from common.errors import ErrorCodes
from common.exceptions import NotFoundError, ValidationError
from services.species_engine.logic.ideals import enumerate_words
from services.species_engine.logic.series import Series, Word, truncate
from services.species_engine.tests.conftest import random_series

RANDOM_SPECIES = ["sqrt2_species", "quaternion_cycle3"]
SEEDS = range(200)
N = 6


@pytest.fixture(params=RANDOM_SPECIES)
def random_pair(request):
    """Factory for two random series of degree <= 6 over the requested species."""
    M = request.getfixturevalue(request.param)
    words = list(enumerate_words(M, N))

    def _pair(seed):
        rng = random.Random(seed)
        f = random_series(M, words, rng, rng.randint(1, 8), N)
        g = random_series(M, words, rng, rng.randint(1, 8), N)
        return f, g, rng.randint(0, N), rng.randint(0, N)

    return _pair


@pytest.mark.parametrize("seed", SEEDS)
def test_nested_truncation(random_pair, seed):
    f, _, m, k = random_pair(seed)
    assert truncate(truncate(f, m), k) == truncate(f, min(m, k))


@pytest.mark.parametrize("seed", SEEDS)
def test_truncation_is_additive(random_pair, seed):
    f, g, m, _ = random_pair(seed)
    assert truncate(f + g, m) == truncate(f, m) + truncate(g, m)


@pytest.mark.parametrize("seed", SEEDS)
def test_truncation_is_multiplicative(random_pair, seed):
    f, g, m, _ = random_pair(seed)
    assert truncate(f * g, m) == truncate(truncate(f, m) * truncate(g, m), m)


@pytest.mark.parametrize("seed", SEEDS)
def test_product_is_associative(random_pair, seed):
    f, g, _, _ = random_pair(seed)
    assert (f * g) * f == f * (g * f)


def test_unit_is_neutral(sqrt2_species, sqrt2_potential):
    one = Series.unit(sqrt2_species, 4)
    assert one * sqrt2_potential == sqrt2_potential
    assert sqrt2_potential * one == sqrt2_potential


def test_labels_multiply_in_the_algebra(sqrt2_species):
    M = sqrt2_species
    b1 = Series.path(M, ["b1"], 3)
    # b1 ends at the Q(sqrt2) vertex
    twice = b1.right_label(2, "sqrt2").right_label(2, "sqrt2")
    assert twice == b1.scale(2)
    assert twice.coefficient(Word(1, 2, ("1", "1"), ("b1",))) == 2


def test_products_drop_terms_above_the_truncation(cycle3):
    abc = Series.path(cycle3, "a b c", 3)
    assert (abc * abc).is_zero()
    assert (abc * abc).degree == 3


def test_zero_coefficients_are_not_stored(cycle3):
    a = Series.path(cycle3, ["a"], 2)
    assert (a - a).is_zero()
    assert list((a - a).items()) == []


def test_monomial_checks(cycle3, sqrt2_species):
    with pytest.raises(ValidationError) as exc:
        Series.path(cycle3, "a c", 3)
    assert exc.value.code == ErrorCodes.NOT_COMPOSABLE

    with pytest.raises(NotFoundError):
        Series.monomial(sqrt2_species, [("sqrt2", "b1")])


def test_series_over_different_bimodules_do_not_mix(cycle3, sqrt2_species):
    with pytest.raises(ValidationError) as exc:
        Series.path(cycle3, ["a"], 2) + Series.path(sqrt2_species, ["a"], 2)
    assert exc.value.code == ErrorCodes.BIMODULE_MISMATCH


def test_cyclic_check(cycle3, cycle3_potential):
    assert cycle3_potential.is_cyclic()
    assert not Series.path(cycle3, "a b", 3).is_cyclic()
