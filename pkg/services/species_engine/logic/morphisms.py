"""
Algebra morphisms F_S(M) -> F_S(M') given by the images of generators.

A map is determined by phi(a) for a in T; it is the identity on S and is
extended multiplicatively and continuously. Images must be legible and have
no degree-0 part.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

from common.errors import ErrorCodes
from common.exceptions import (
    InternalError,
    NotInvertible,
    NotUnitriangular,
    ValidationError,
)
from services.species_engine.logic.bimodule import Bimodule
from services.species_engine.logic.fields import Scalar
from services.species_engine.logic.linalg import EchelonBasis, add_scaled
from services.species_engine.logic.series import (
    Series,
    Word,
    label_word,
    multiply_words,
    word_sort_key,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GeneratorMap:
    """phi: F_S(source) -> F_S(target), one image series per source generator."""

    source: Bimodule
    target: Bimodule
    images: Mapping[str, Series]
    degree: int

    def __post_init__(self) -> None:
        if self.source.species != self.target.species:
            raise ValidationError(
                ErrorCodes.BIMODULE_MISMATCH, "generator maps must fix the species"
            )
        missing = [a for a in self.source.names if a not in self.images]
        if missing:
            raise ValidationError(
                ErrorCodes.INVALID_INPUT, f"no image for generators {missing}"
            )
        fixed = {}
        for name, image in self.images.items():
            gen = self.source.generator(name)
            if image.bimodule != self.target:
                raise ValidationError(
                    ErrorCodes.BIMODULE_MISMATCH, f"image of {name} has wrong bimodule"
                )
            for word in image.terms:
                if word.degree == 0 or (word.start, word.end) != (gen.sigma, gen.tau):
                    raise ValidationError(
                        ErrorCodes.NOT_LEGIBLE,
                        f"image of {name} is not in e_{gen.sigma} F^(>=1) e_{gen.tau}",
                    )
            fixed[name] = image.truncate(self.degree).with_degree(self.degree)
        object.__setattr__(self, "images", fixed)

    @classmethod
    def build(
        cls,
        source: Bimodule,
        target: Bimodule,
        images: Mapping[str, Series],
        degree: int,
    ) -> GeneratorMap:
        """Like the constructor, but generators without an image map to themselves."""
        full = dict(images)
        for gen in source.generators:
            if gen.name not in full:
                full[gen.name] = Series.path(target, [gen.name], degree)
        return cls(source, target, full, degree)

    @classmethod
    def identity(cls, M: Bimodule, degree: int) -> GeneratorMap:
        return cls.build(M, M, {}, degree)

    def linear_part(self) -> GeneratorMap:
        return GeneratorMap(
            self.source,
            self.target,
            {a: img.homogeneous(1) for a, img in self.images.items()},
            self.degree,
        )

    def higher_part(self) -> dict[str, Series]:
        return {a: img.part(2) for a, img in self.images.items()}

    def is_unitriangular(self) -> bool:
        if self.source != self.target:
            return False
        return all(
            img.homogeneous(1) == Series.path(self.target, [a], self.degree)
            for a, img in self.images.items()
        )

    def apply(self, h: Series, degree: int | None = None) -> Series:
        return apply_generator_map(self, h, degree)

    def compose(self, inner: GeneratorMap) -> GeneratorMap:
        """self after inner: a -> self(inner(a))."""
        if inner.target != self.source:
            raise ValidationError(
                ErrorCodes.BIMODULE_MISMATCH, "cannot compose: bimodules differ"
            )
        degree = min(self.degree, inner.degree)
        return GeneratorMap(
            inner.source,
            self.target,
            {a: self.apply(img, degree) for a, img in inner.images.items()},
            degree,
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{a} -> {img.text()}" for a, img in self.images.items())
        return f"GeneratorMap[N={self.degree}]({body})"


def apply_generator_map(
    phi: GeneratorMap, h: Series, degree: int | None = None
) -> Series:
    """Substitute phi(a) for every generator of h and truncate."""
    if h.bimodule != phi.source:
        raise ValidationError(
            ErrorCodes.BIMODULE_MISMATCH, "series is not over the map's source"
        )
    N = min(h.degree, phi.degree) if degree is None else min(degree, h.degree)
    T = phi.target
    images = {a: img.truncate(N) for a, img in phi.images.items()}
    result: dict[Word, Scalar] = {}
    for word, coeff in h.items():
        if word.degree > N:
            continue
        acc: dict[Word, Scalar] = {label_word(word.start, word.labels[0]): coeff}
        remaining = word.degree
        for arrow, label in zip(word.arrows, word.labels[1:], strict=True):
            remaining -= 1
            # every later factor adds at least one degree
            budget = N - remaining
            step: dict[Word, Scalar] = {}
            for u, cu in acc.items():
                for v, cv in images[arrow].items():
                    if u.degree + v.degree > budget:
                        continue
                    add_scaled(step, multiply_words(T, u, v), cu * cv)
            acc = {}
            for u, cu in step.items():
                add_scaled(acc, multiply_words(T, u, label_word(u.end, label)), cu)
            if not acc:
                break
        add_scaled(result, acc, 1)
    return Series(T, result, N)


# =============================================================================
# Inversion
# =============================================================================


def invert_linear(phi: GeneratorMap) -> GeneratorMap:
    """
    Inverse of the degree-1 part of phi, as a map target -> source.

    Solves phi1(x) = 1 b 1 for every target generator b over the F-basis
    {s a t} of the matching block.

    Raises:
        NotInvertible: phi1 is not an isomorphism.
    """
    S, T = phi.source, phi.target
    species = S.species
    linear = {a: img.homogeneous(1) for a, img in phi.images.items()}
    inverse: dict[str, Series] = {}
    blocks = {(g.sigma, g.tau) for g in T.generators} | {
        (g.sigma, g.tau) for g in S.generators
    }
    for i, j in sorted(blocks):
        if S.block_dim(i, j) != T.block_dim(i, j):
            raise NotInvertible(f"block e{i}Me{j} changes dimension")
        solver = EchelonBasis(word_sort_key, track=True)
        for gen in S.block(i, j):
            for s in species.labels(i):
                for t in species.labels(j):
                    image = linear[gen.name].left_label(i, s).right_label(j, t)
                    solver.add(dict(image.terms), tag=Word(i, j, (s, t), (gen.name,)))
        if solver.rank != S.block_dim(i, j):
            raise NotInvertible(f"linear part is singular on block e{i}Me{j}")
        for gen in T.block(i, j):
            target_word = Word(i, j, (species.unit(i), species.unit(j)), (gen.name,))
            combo = solver.express({target_word: species.field.one})
            if combo is None:
                raise NotInvertible(f"{gen.name} is not in the image")
            inverse[gen.name] = Series(S, combo, phi.degree)
    return GeneratorMap(T, S, inverse, phi.degree)


def invert_unitriangular(phi: GeneratorMap, degree: int | None = None) -> GeneratorMap:
    """
    Inverse of a unitriangular automorphism.

    Fixed-point iteration rho <- rho - (phi(rho(a)) - a); the error gains at
    least one degree per round, so N rounds reach the truncation.

    Raises:
        NotUnitriangular: the linear part of phi is not the identity.
    """
    if not phi.is_unitriangular():
        raise NotUnitriangular()
    N = phi.degree if degree is None else min(degree, phi.degree)
    M = phi.source
    generators = {a: Series.path(M, [a], N) for a in M.names}
    rho = dict(generators)
    for _ in range(N + 1):
        errors = {a: phi.apply(rho[a], N) - generators[a] for a in M.names}
        if all(e.is_zero() for e in errors.values()):
            return GeneratorMap(M, M, rho, N)
        rho = {a: rho[a] - errors[a] for a in M.names}
    raise InternalError(
        "unitriangular inversion did not converge",
        code=ErrorCodes.NOT_UNITRIANGULAR,
        diagnostics={"degree": N},
    )


def invert(phi: GeneratorMap, degree: int | None = None) -> GeneratorMap:
    """
    Inverse of an automorphism with invertible linear part.

    phi = L o psi with L linear and psi = L^-1 o phi unitriangular, so
    phi^-1 = psi^-1 o L^-1.
    """
    N = phi.degree if degree is None else min(degree, phi.degree)
    linear_inverse = invert_linear(phi)
    psi = linear_inverse.compose(phi)
    psi_inverse = invert_unitriangular(psi, N)
    logger.debug(f"Inverted generator map at degree {N}")
    return psi_inverse.compose(linear_inverse)
