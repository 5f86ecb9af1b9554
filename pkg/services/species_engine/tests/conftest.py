"""
Shared species, bimodules and potentials for the engine tests.
"""

from fractions import Fraction
from pathlib import Path

import pytest

from services.species_engine.logic.bimodule import Species, build_bimodule
from services.species_engine.logic.ideals import enumerate_words
from services.species_engine.logic.morphisms import GeneratorMap
from services.species_engine.logic.presets import quadratic, quaternion, rational
from services.species_engine.logic.series import Series

ROOT = Path(__file__).resolve().parents[3]
PROBLEMS = ROOT / "problems"
GOLDEN = Path(__file__).resolve().parent / "golden"


def three_cycle(*tables):
    """a: 1 -> 2, b: 2 -> 3, c: 3 -> 1 over the given algebras."""
    species = Species(tuple(tables))
    return build_bimodule(species, [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)])


def random_series(M, words, rng, size, degree):
    """Up to size of the given words with small random rational coefficients."""
    terms = {
        w: Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        for w in rng.sample(words, min(size, len(words)))
    }
    return Series(M, terms, degree)


def random_automorphism(M, rng, degree, linear=True, longest=4, extra=2):
    """
    a -> c a + (later generators of its block) + random words of degree
    2..longest from sigma(a) to tau(a).

    The linear part is triangular with nonzero diagonal; with linear=False
    it is the identity and the map is unitriangular.
    """
    names = M.names
    images = {}
    for gen in M.generators:
        candidates = [
            w
            for w in enumerate_words(M, longest, start=gen.sigma)
            if w.degree >= 2 and w.end == gen.tau
        ]
        image = Series.path(M, [gen.name], degree)
        if linear:
            image = image.scale(rng.choice([-2, -1, 2, Fraction(1, 2)]))
            for other in M.block(gen.sigma, gen.tau):
                if names.index(other.name) > names.index(gen.name):
                    image = image + Series.path(
                        M, [other.name], degree, rng.choice([-1, 0, 1])
                    )
        for w in rng.sample(candidates, min(extra, len(candidates))):
            image = image + Series(M, {w: rng.choice([-2, -1, 1, 2])}, degree)
        images[gen.name] = image
    return GeneratorMap(M, M, images, degree)


def random_unitriangular(M, rng, degree, **kwargs):
    return random_automorphism(M, rng, degree, linear=False, **kwargs)


@pytest.fixture
def sqrt2_species():
    """(Q, Q(sqrt2)) with a: 2 -> 1 and b1, b2: 1 -> 2."""
    species = Species((rational(), quadratic(2)))
    return build_bimodule(species, [("a", 2, 1), ("b1", 1, 2), ("b2", 1, 2)])


@pytest.fixture
def sqrt2_potential(sqrt2_species):
    """(1 a)(1 b1)1 + (sqrt2 a)(1 b2)1."""
    M = sqrt2_species
    return Series.monomial(M, [("1", "a"), ("1", "b1")], "1", 1, 4) + Series.monomial(
        M, [("sqrt2", "a"), ("1", "b2")], "1", 1, 4
    )


@pytest.fixture
def cycle3():
    return three_cycle(rational(), rational(), rational())


@pytest.fixture
def cycle3_potential(cycle3):
    return Series.path(cycle3, "a b c", 6)


@pytest.fixture
def sqrt2_cycle3():
    """Three-cycle with Q(sqrt2) at the middle vertex."""
    return three_cycle(rational(), quadratic(2), rational())


@pytest.fixture
def sqrt2_end_cycle3():
    """Three-cycle with Q(sqrt2) at vertex 3."""
    return three_cycle(rational(), rational(), quadratic(2))


@pytest.fixture
def quaternion_cycle3():
    """Three-cycle with the quaternions at vertex 1."""
    return three_cycle(quaternion(), rational(), rational())


@pytest.fixture
def problem_path():
    def _path(name: str) -> str:
        return str(PROBLEMS / name)

    return _path
