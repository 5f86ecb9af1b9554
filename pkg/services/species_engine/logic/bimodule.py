"""
Species and Z-freely generated bimodules.

A bimodule is stored through its generator set T: each generator is legible,
a = e_sigma a e_tau, and the block e_i M e_j has F-dimension
d(i) * m(i, j) * d(j). Vertices are numbered from 1.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property

from common.errors import ErrorCodes
from common.exceptions import MutationUndefinedAtVertex, NotFoundError, ValidationError
from services.species_engine.logic.division_algebra import DivisionAlgebra
from services.species_engine.logic.fields import GroundField

logger = logging.getLogger(__name__)


class GeneratorKind(StrEnum):
    PLAIN = "plain"
    BRACKET = "bracket"
    RIGHT_DUAL = "right_dual"
    LEFT_DUAL = "left_dual"


@dataclass(frozen=True)
class Generator:
    """
    A named generator a with sigma(a) = start vertex and tau(a) = end vertex.

    origin records provenance: (a, s, b) for a bracket [a s b], (x,) for the
    duals x* and *x.
    """

    name: str
    sigma: int
    tau: int
    kind: GeneratorKind = GeneratorKind.PLAIN
    origin: tuple[str, ...] = ()


@dataclass(frozen=True)
class Species:
    """S = D_1 x ... x D_n over a common ground field."""

    algebras: tuple[DivisionAlgebra, ...]

    def __post_init__(self) -> None:
        if not self.algebras:
            raise ValidationError(ErrorCodes.INVALID_INPUT, "species needs n >= 1")
        fields = {a.field for a in self.algebras}
        if len(fields) != 1:
            raise ValidationError(
                ErrorCodes.INVALID_INPUT, "all algebras must share one ground field"
            )

    @property
    def field(self) -> GroundField:
        return self.algebras[0].field

    @property
    def n(self) -> int:
        return len(self.algebras)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def algebra(self, vertex: int) -> DivisionAlgebra:
        return self.algebras[vertex - 1]

    def dim(self, vertex: int) -> int:
        return self.algebras[vertex - 1].dim

    def labels(self, vertex: int) -> tuple[str, ...]:
        return self.algebras[vertex - 1].basis

    def unit(self, vertex: int) -> str:
        return self.algebras[vertex - 1].unit

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(a.dim for a in self.algebras)


@dataclass(frozen=True)
class Bimodule:
    """A species together with a Z-free generator set T."""

    species: Species
    generators: tuple[Generator, ...]

    @cached_property
    def _by_name(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise NotFoundError("generator", name) from None

    def multiplicity(self, i: int, j: int) -> int:
        return sum(1 for g in self.generators if g.sigma == i and g.tau == j)

    def block(self, i: int, j: int) -> list[Generator]:
        """Generators of e_i M e_j, sorted by name."""
        return sorted(
            (g for g in self.generators if g.sigma == i and g.tau == j),
            key=lambda g: g.name,
        )

    def block_dim(self, i: int, j: int) -> int:
        return self.species.dim(i) * self.multiplicity(i, j) * self.species.dim(j)

    def block_dims(self) -> dict[tuple[int, int], int]:
        """Nonzero F-dimensions of the blocks e_i M e_j."""
        dims = {}
        for i in self.species.vertices:
            for j in self.species.vertices:
                d = self.block_dim(i, j)
                if d:
                    dims[i, j] = d
        return dims

    @property
    def dim(self) -> int:
        return sum(self.block_dims().values())

    def out_of(self, k: int) -> list[Generator]:
        """T intersect e_k M."""
        return [g for g in self.generators if g.sigma == k]

    def into(self, k: int) -> list[Generator]:
        """T intersect M e_k."""
        return [g for g in self.generators if g.tau == k]

    @property
    def has_loops(self) -> bool:
        return any(g.sigma == g.tau for g in self.generators)

    def two_cycles_through(self, k: int) -> list[int]:
        """Vertices i != k with both e_i M e_k and e_k M e_i nonzero."""
        return [
            i
            for i in self.species.vertices
            if i != k and self.multiplicity(i, k) and self.multiplicity(k, i)
        ]

    def two_cycle_pairs(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in self.species.vertices
            for j in self.species.vertices
            if i < j and self.multiplicity(i, j) and self.multiplicity(j, i)
        ]

    @property
    def is_two_acyclic(self) -> bool:
        return not self.has_loops and not self.two_cycle_pairs()

    def right_basis(self) -> list[tuple[str, str]]:
        """The special basis {s a}: pairs (s, a) with s in L(sigma(a))."""
        return [
            (s, g.name) for g in self.generators for s in self.species.labels(g.sigma)
        ]

    def left_basis(self) -> list[tuple[str, str]]:
        """The left basis {a t}: pairs (a, t) with t in L(tau(a))."""
        return [
            (g.name, t) for g in self.generators for t in self.species.labels(g.tau)
        ]

    def without(self, names: Iterable[str]) -> Bimodule:
        drop = set(names)
        return Bimodule(
            self.species, tuple(g for g in self.generators if g.name not in drop)
        )

    def with_generators(self, generators: Iterable[Generator]) -> Bimodule:
        return build_bimodule(self.species, list(generators))

    def fresh_name(self, base: str, taken: Iterable[str] = ()) -> str:
        """base with enough primes appended to avoid every existing name."""
        used = set(self.names) | set(taken)
        name = base + "'"
        while name in used:
            name += "'"
        return name

    def __repr__(self) -> str:
        arrows = ", ".join(f"{g.name}:({g.sigma},{g.tau})" for g in self.generators)
        return f"<Bimodule n={self.species.n} [{arrows}]>"


def build_bimodule(
    species: Species, arrows: Iterable[Generator | tuple[str, int, int]]
) -> Bimodule:
    """
    Bimodule generated by the given arrows.

    Raises:
        ValidationError: duplicate name or vertex out of range.
    """
    generators: list[Generator] = []
    seen: set[str] = set()
    for index, arrow in enumerate(arrows):
        gen = arrow if isinstance(arrow, Generator) else Generator(*arrow)
        if gen.name in seen:
            raise ValidationError(
                ErrorCodes.INVALID_INPUT,
                f"duplicate generator name '{gen.name}'",
                path=f"arrows.{index}.name",
            )
        for side, vertex in (("from", gen.sigma), ("to", gen.tau)):
            if vertex not in species.vertices:
                raise ValidationError(
                    ErrorCodes.INVALID_INPUT,
                    f"vertex {vertex} of '{gen.name}' out of range 1..{species.n}",
                    path=f"arrows.{index}.{side}",
                )
        seen.add(gen.name)
        generators.append(gen)
    return Bimodule(species, tuple(generators))


# =============================================================================
# Duals and the mutated bimodule
# =============================================================================


def right_dual_name(name: str) -> str:
    return f"({name})*" if "*" in name else f"{name}*"


def left_dual_name(name: str) -> str:
    return f"*({name})" if "*" in name else f"*{name}"


def bracket_name(a: str, label: str, b: str, unit: str) -> str:
    return f"[{a}{b}]" if label == unit else f"[{a} {label} {b}]"


@dataclass(frozen=True)
class DualGenerators:
    right: tuple[Generator, ...]
    left: tuple[Generator, ...]


def dual_generators(M: Bimodule, k: int) -> DualGenerators:
    """Generators of (e_k M)* and *(M e_k)."""
    right = tuple(
        Generator(
            right_dual_name(a.name), a.tau, k, GeneratorKind.RIGHT_DUAL, (a.name,)
        )
        for a in M.out_of(k)
    )
    left = tuple(
        Generator(
            left_dual_name(b.name), k, b.sigma, GeneratorKind.LEFT_DUAL, (b.name,)
        )
        for b in M.into(k)
    )
    return DualGenerators(right=right, left=left)


def check_mutable(M: Bimodule, k: int) -> None:
    """Raise MutationUndefinedAtVertex unless M is loop-free with no 2-cycle at k."""
    if k not in M.species.vertices:
        raise ValidationError(
            ErrorCodes.INVALID_INPUT, f"vertex {k} out of range 1..{M.species.n}"
        )
    if M.has_loops:
        raise MutationUndefinedAtVertex(k, "bimodule has loops")
    cycles = M.two_cycles_through(k)
    if cycles:
        raise MutationUndefinedAtVertex(k, f"2-cycles through {k} with {cycles}")


def mu_bimodule(M: Bimodule, k: int) -> Bimodule:
    """
    The premutated bimodule at k.

    Generators, in order: T away from k, brackets [a s b] for a in T into k,
    s in L(k), b in T out of k, right duals of T out of k, left duals of T
    into k.
    """
    check_mutable(M, k)
    species = M.species
    unit = species.unit(k)
    away = [g for g in M.generators if g.sigma != k and g.tau != k]
    brackets = [
        Generator(
            bracket_name(a.name, s, b.name, unit),
            a.sigma,
            b.tau,
            GeneratorKind.BRACKET,
            (a.name, s, b.name),
        )
        for a in M.into(k)
        for s in species.labels(k)
        for b in M.out_of(k)
    ]
    duals = dual_generators(M, k)
    generators = [*away, *brackets, *duals.right, *duals.left]
    names = [g.name for g in generators]
    if len(set(names)) != len(names):
        raise ValidationError(
            ErrorCodes.INVALID_INPUT,
            f"generator names collide after mutation at {k}: {sorted(names)}",
        )
    logger.debug(
        f"mu_{k}: {len(away)} kept, {len(brackets)} brackets, "
        f"{len(duals.right)}+{len(duals.left)} duals"
    )
    return Bimodule(species, tuple(generators))
