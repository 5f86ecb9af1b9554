import random

import pytest

from common.errors import ErrorCodes
from common.exceptions import MutationUndefinedAtVertex
from services.species_engine.logic.bimodule import (
    GeneratorKind,
    Species,
    build_bimodule,
    mu_bimodule,
)
from services.species_engine.logic.cyclic import is_cyclically_equivalent
from services.species_engine.logic.exchange import exchange_matrix
from services.species_engine.logic.mutation import (
    MutationStatus,
    kappa,
    matrix_coherent,
    mutate,
    premutate,
    try_mutate,
)
from services.species_engine.logic.presets import quadratic, quaternion, rational
from services.species_engine.logic.seeds import seed_potential
from services.species_engine.logic.series import Series
from services.species_engine.pipeline.involution import invariants
from services.species_engine.tests.conftest import random_automorphism

CORPUS = ["cycle3", "sqrt2_cycle3", "quaternion_cycle3"]


def test_mutated_bimodule_layout(cycle3):
    mu = mu_bimodule(cycle3, 2)
    assert mu.names == ("c", "[ab]", "b*", "*a")
    assert [(g.sigma, g.tau) for g in mu.generators] == [(3, 1), (1, 3), (3, 2), (2, 1)]
    assert mu.generator("[ab]").kind == GeneratorKind.BRACKET
    assert mu.generator("[ab]").origin == ("a", "1", "b")
    assert mu.generator("*a").kind == GeneratorKind.LEFT_DUAL


def test_premutated_three_cycle(cycle3, cycle3_potential):
    pre = premutate(cycle3, cycle3_potential, 2)
    mu = pre.bimodule
    expected = Series.path(mu, "[ab] c", 6) + Series.path(mu, "[ab] b* *a", 6)
    assert pre.potential == expected


def test_kappa_clears_cycles_at_k(cycle3, cycle3_potential):
    rotated = kappa(cycle3_potential, 1)
    assert all(w.start != 1 for w, _ in rotated.items())
    assert is_cyclically_equivalent(rotated, cycle3_potential)


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_premutation_has_no_cycles_at_k(request, name, k):
    M = request.getfixturevalue(name)
    P = seed_potential(M, k, 4) + Series.path(M, "a b c", 4)
    pre = premutate(M, P, k)
    assert pre.potential.is_cyclic()
    assert all(w.start != k for w, _ in pre.potential.items() if w.degree)


def test_mutate_three_cycle(cycle3, cycle3_potential):
    outcome = mutate(cycle3, cycle3_potential, 2)

    assert outcome.defined
    assert outcome.bimodule.names == ("b*", "*a")
    assert outcome.potential.is_zero()
    assert sorted(outcome.split.removed) == ["[ab]", "c"]
    assert exchange_matrix(outcome.bimodule).to_list() == [
        [0, -1, 0],
        [1, 0, -1],
        [0, 1, 0],
    ]
    assert matrix_coherent(cycle3, outcome)


@pytest.mark.parametrize("name", CORPUS)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_seed_potentials_mutate_coherently(request, name, k):
    M = request.getfixturevalue(name)
    P = seed_potential(M, k)
    outcome = try_mutate(M, P, k)

    assert outcome.status == MutationStatus.DEFINED
    assert outcome.bimodule.is_two_acyclic
    assert matrix_coherent(M, outcome)


def test_quaternion_mutation_keeps_extra_brackets(quaternion_cycle3):
    M = quaternion_cycle3
    outcome = mutate(M, seed_potential(M, 1), 1)
    assert outcome.bimodule.block_dims() == {(1, 3): 4, (2, 1): 4, (3, 2): 3}
    assert matrix_coherent(M, outcome)


def test_seed_potential_is_zero_without_through_paths():
    species = Species((rational(), rational()))
    M = build_bimodule(species, [("a", 1, 2)])
    P = seed_potential(M, 2)
    assert P.is_zero()

    outcome = mutate(M, P, 2)
    assert outcome.bimodule.names == ("*a",)
    assert matrix_coherent(M, outcome)


def test_two_cycles_block_mutation(sqrt2_species, sqrt2_potential):
    with pytest.raises(MutationUndefinedAtVertex) as exc:
        mutate(sqrt2_species, sqrt2_potential, 1)
    assert exc.value.code == ErrorCodes.MUTATION_UNDEFINED
    assert exc.value.exit_code == 2

    outcome = try_mutate(sqrt2_species, sqrt2_potential, 2)
    assert outcome.status == MutationStatus.UNDEFINED
    assert not outcome.defined
    assert outcome.details["code"] == ErrorCodes.MUTATION_UNDEFINED
    assert not matrix_coherent(sqrt2_species, outcome)


CYCLE = [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)]

MORE_SPECIES = {
    "more_paths_than_returns": lambda: (
        (rational(), rational(), rational()),
        [("a1", 1, 2), ("a2", 1, 2), ("b", 2, 3), ("c", 3, 1)],
    ),
    "three_returns": lambda: (
        (rational(), rational(), rational()),
        [("a", 1, 2), ("b", 2, 3), ("c1", 3, 1), ("c2", 3, 1), ("c3", 3, 1)],
    ),
    "sqrt2_at_both_ends": lambda: ((quadratic(2), rational(), quadratic(2)), CYCLE),
    "quaternion_at_k_two_returns": lambda: (
        (rational(), quaternion(), rational()),
        [("a", 1, 2), ("b", 2, 3), ("c1", 3, 1), ("c2", 3, 1)],
    ),
    "sqrt2_and_sqrt3": lambda: ((quadratic(2), quadratic(3), rational()), CYCLE),
    "four_vertices": lambda: (
        (rational(), rational(), rational(), rational()),
        [("a", 1, 2), ("b", 2, 3), ("c", 3, 1), ("d", 2, 4), ("e", 4, 1)],
    ),
}


@pytest.fixture(params=sorted(MORE_SPECIES))
def species_through_2(request):
    algebras, arrows = MORE_SPECIES[request.param]()
    return build_bimodule(Species(algebras), arrows)


def test_seed_potentials_mutate_coherently_at_2(species_through_2):
    M = species_through_2
    P = seed_potential(M, 2)
    assert not P.is_zero()
    outcome = try_mutate(M, P, 2)

    assert outcome.status == MutationStatus.DEFINED
    assert outcome.bimodule.is_two_acyclic
    assert outcome.potential.homogeneous(2).is_zero()
    assert matrix_coherent(M, outcome)


@pytest.mark.parametrize("name, k", [("sqrt2_cycle3", 2), ("quaternion_cycle3", 1)])
@pytest.mark.parametrize("seed", range(10))
def test_mutation_respects_right_equivalence(request, name, k, seed):
    M = request.getfixturevalue(name)
    P = Series.path(M, "a b c", 6) + Series.path(M, "a b c a b c", 6)
    phi = random_automorphism(M, random.Random(seed), 6)

    plain = mutate(M, P, k)
    moved = mutate(M, phi.apply(P), k)
    assert matrix_coherent(M, moved)
    first = invariants(plain.bimodule, plain.potential, 4)
    second = invariants(moved.bimodule, moved.potential, 4)
    assert first.matches(second) == {
        "exchange_matrix": True,
        "quotient_dims": True,
        "def_dims": True,
    }
