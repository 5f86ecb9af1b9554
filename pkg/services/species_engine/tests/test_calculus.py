import pytest

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.logic.calculus import (
    Functional,
    delta,
    delta_psi,
    jacobian_generators,
    r_generators,
    x_gen,
    x_map,
)
from services.species_engine.logic.ideals import ideal_span
from services.species_engine.logic.series import Series, Word


def test_cyclic_derivative_of_the_sqrt2_potential(sqrt2_potential):
    expected = {
        Word(2, 2, ("1", "1", "1"), ("a", "b1")): 1,
        Word(1, 1, ("1", "1", "1"), ("b1", "a")): 1,
        Word(2, 2, ("sqrt2", "1", "1"), ("a", "b2")): 1,
        Word(1, 1, ("1", "sqrt2", "1"), ("b2", "a")): 1,
    }
    assert dict(delta(sqrt2_potential).terms) == expected


def test_x_values(sqrt2_species, sqrt2_potential):
    M, P = sqrt2_species, sqrt2_potential
    assert dict(x_gen(P, "a").terms) == {
        Word(1, 2, ("1", "1"), ("b1",)): 1,
        Word(1, 2, ("1", "sqrt2"), ("b2",)): 1,
    }
    assert x_gen(P, "b1") == Series.path(M, ["a"], 3)
    assert dict(x_gen(P, "b2").terms) == {Word(2, 1, ("sqrt2", "1"), ("a",)): 1}


def test_derivatives_lose_one_degree(sqrt2_potential):
    assert x_gen(sqrt2_potential, "a").degree == sqrt2_potential.degree - 1
    psi = Functional.dual(sqrt2_potential.bimodule, "a")
    assert delta_psi(sqrt2_potential, psi).degree == sqrt2_potential.degree - 1


def test_dual_functional_derivative(sqrt2_species, sqrt2_potential):
    M, P = sqrt2_species, sqrt2_potential
    assert delta_psi(P, Functional.dual(M, "a")) == Series.path(M, ["b1"], 3)
    assert delta_psi(P, Functional.dual(M, "a", "sqrt2")) == Series.path(M, ["b2"], 3)


def test_r_is_smaller_than_j(sqrt2_species, sqrt2_potential):
    M, P = sqrt2_species, sqrt2_potential
    b1 = Series.path(M, ["b1"], 4)
    assert ideal_span(jacobian_generators(P), 4, M).contains(b1)
    assert not ideal_span(r_generators(P), 4, M).contains(b1)


def test_x_map_is_additive(sqrt2_species, sqrt2_potential):
    M, P = sqrt2_species, sqrt2_potential
    first = Functional.dual(M, "a")
    second = Functional.dual(M, "b2")
    assert x_map(P, first + second) == x_map(P, first) + x_map(P, second)
    assert x_map(P, Functional.zero(M)).is_zero()


def test_functional_labels_are_checked(sqrt2_species):
    with pytest.raises(ValidationError) as exc:
        Functional(sqrt2_species, {("sqrt2", "b1"): {"1": 1}})
    assert exc.value.code == ErrorCodes.UNKNOWN_LABEL


def test_strict_derivative_rejects_open_words(cycle3):
    with pytest.raises(ValidationError) as exc:
        delta(Series.path(cycle3, "a b", 4))
    assert exc.value.code == ErrorCodes.NON_CYCLIC
    assert delta(Series.path(cycle3, "a b", 4), strict=False).is_zero()
