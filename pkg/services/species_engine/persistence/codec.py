"""
Problem-file and series codec.

Reads JSON problem files into (species, bimodule, potential) and writes
bimodules, series and reports back as deterministic JSON: terms sorted by
word_sort_key, scalars as lowest-terms fraction strings.
"""

from __future__ import annotations

import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.core.config import get_settings
from services.species_engine.logic.bimodule import (
    Bimodule,
    Species,
    build_bimodule,
)
from services.species_engine.logic.fields import GroundField, field_from_descriptor
from services.species_engine.logic.morphisms import GeneratorMap
from services.species_engine.logic.presets import algebra_from_descriptor
from services.species_engine.logic.series import Series, Word
from services.species_engine.schemas.problem import (
    ArrowSchema,
    BimoduleSchema,
    ProblemFile,
    SeriesSchema,
    TermSchema,
)

logger = logging.getLogger(__name__)

STDIO = "-"


@dataclass
class Problem:
    """A parsed problem file."""

    field: GroundField
    species: Species
    bimodule: Bimodule
    potential: Series | None
    degree: int | None

    def truncation(self, flag: int | None = None) -> int:
        """--degree flag, then the file's degree, then the potential's, then 8."""
        if flag is not None:
            return flag
        if self.degree is not None:
            return self.degree
        if self.potential is not None:
            return self.potential.degree
        return get_settings().DEFAULT_DEGREE

    def potential_or_zero(self) -> Series:
        if self.potential is None:
            return Series.zero(self.bimodule, self.truncation())
        return self.potential


# =============================================================================
# Reading
# =============================================================================


def read_json(source: str | Path) -> Any:
    """Raw JSON from a path, or stdin for "-"."""
    try:
        if str(source) == STDIO:
            return json.load(sys.stdin)
        with open(source, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as e:
        raise ValidationError(
            ErrorCodes.INVALID_INPUT, f"no such file '{source}'"
        ) from e
    except json.JSONDecodeError as e:
        raise ValidationError(
            ErrorCodes.INVALID_INPUT, f"invalid JSON at line {e.lineno}: {e.msg}"
        ) from e


def parse_problem(raw: Any) -> ProblemFile:
    """
    Validate raw JSON against ProblemFile.

    Raises:
        ValidationError: with the dotted path of the first offending field.
    """
    try:
        return ProblemFile.model_validate(raw)
    except PydanticValidationError as e:
        first = e.errors()[0]
        path = ".".join(str(part) for part in first["loc"])
        raise ValidationError(
            ErrorCodes.INVALID_INPUT, f"{path}: {first['msg']}", path=path
        ) from e


def build_problem(problem: ProblemFile, degree: int | None = None) -> Problem:
    """
    Materialize a validated problem file.

    Flow:
    1. Ground field and one division algebra per vertex
    2. Bimodule from the arrow list
    3. Potential at the degree the file declares, then truncated to --degree
    """
    # 1. Species
    ground = field_from_descriptor(problem.field)
    algebras = tuple(
        algebra_from_descriptor(desc, ground, path=f"species.{i}")
        for i, desc in enumerate(problem.species)
    )
    species = Species(algebras)

    # 2. Bimodule
    M = build_bimodule(species, [(a.name, a.from_, a.to) for a in problem.arrows])

    # 3. Potential
    parsed = Problem(ground, species, M, None, problem.degree)
    if problem.potential is not None:
        declared = problem.degree
        if declared is None:
            declared = problem.potential.degree
        if declared is None:
            longest = max((len(t.word) for t in problem.potential.terms), default=0)
            declared = max(get_settings().DEFAULT_DEGREE, longest)
        P = series_from_schema(M, problem.potential, declared, "potential")
        if degree is not None:
            P = P.truncate(degree) if degree <= declared else P.with_degree(degree)
        parsed.potential = P
    logger.debug(
        f"Loaded problem: {species.n} vertices, {len(M.generators)} generators"
    )
    return parsed


def load_problem(source: str | Path, degree: int | None = None) -> Problem:
    """Read, validate and build a problem file ("-" for stdin)."""
    return build_problem(parse_problem(read_json(source)), degree)


def series_from_schema(
    M: Bimodule, schema: SeriesSchema, degree: int, path: str = "potential"
) -> Series:
    """
    Series from its JSON form.

    Raises:
        ValidationError: a term exceeds N, or its scalar or shape is invalid.
        NotFoundError: an unknown label or generator.
    """
    ground = M.species.field
    total = Series.zero(M, degree)
    for index, term in enumerate(schema.terms):
        where = f"{path}.terms.{index}"
        coeff = _parse_scalar(ground, term.coeff, f"{where}.coeff")
        if len(term.word) > degree:
            raise ValidationError(
                ErrorCodes.DEGREE_EXCEEDED,
                f"term of degree {len(term.word)} exceeds truncation {degree}",
                path=where,
            )
        if not term.word:
            if term.vertex is None or term.vertex not in M.species.vertices:
                raise ValidationError(
                    ErrorCodes.INVALID_INPUT,
                    "a degree-0 term needs a valid vertex",
                    path=f"{where}.vertex",
                )
            label = term.tail or M.species.unit(term.vertex)
            total = total + Series.scalar(M, term.vertex, {label: coeff}, degree)
            continue
        for position, (_, arrow) in enumerate(term.word):
            if arrow not in M:
                raise ValidationError(
                    ErrorCodes.UNKNOWN_GENERATOR,
                    f"unknown generator '{arrow}'",
                    path=f"{where}.word.{position}",
                )
        pairs = [(label, arrow) for label, arrow in term.word]
        total = total + Series.monomial(M, pairs, term.tail, coeff, degree)
    return total


def _parse_scalar(ground: GroundField, text: str, path: str):
    try:
        return ground.parse(text)
    except ValidationError as e:
        raise ValidationError(e.code, e.message, path=path) from e


# =============================================================================
# Writing
# =============================================================================


def term_to_schema(M: Bimodule, word: Word, coeff: Any) -> TermSchema:
    ground = M.species.field
    if word.degree == 0:
        return TermSchema(
            coeff=ground.format(coeff), word=[], tail=word.tail, vertex=word.start
        )
    return TermSchema(
        coeff=ground.format(coeff), word=list(word.pairs()), tail=word.tail
    )


def series_to_schema(h: Series) -> SeriesSchema:
    """JSON form of h, terms in word order."""
    return SeriesSchema(
        degree=h.degree,
        terms=[term_to_schema(h.bimodule, w, c) for w, c in h.sorted_terms()],
    )


def species_descriptors(species: Species) -> list[Any]:
    return [algebra.preset for algebra in species.algebras]


def bimodule_to_schema(M: Bimodule) -> BimoduleSchema:
    return BimoduleSchema(
        field=M.species.field.descriptor(),
        species=species_descriptors(M.species),
        arrows=[
            ArrowSchema(name=g.name, from_=g.sigma, to=g.tau) for g in M.generators
        ],
        block_dims={f"{i},{j}": d for (i, j), d in sorted(M.block_dims().items())},
    )


def problem_payload(M: Bimodule, P: Series | None, degree: int | None) -> dict:
    """A problem-file dict for (M, P): what `validate` reads back."""
    payload: dict[str, Any] = {
        "field": M.species.field.descriptor(),
        "species": species_descriptors(M.species),
        "arrows": [
            {"name": g.name, "from": g.sigma, "to": g.tau} for g in M.generators
        ],
    }
    if P is not None:
        payload["potential"] = dump_model(series_to_schema(P))
    if degree is not None:
        payload["degree"] = degree
    return payload


def dump_model(model: BaseModel) -> dict:
    return model.model_dump(mode="json", by_alias=True, exclude_none=True)


def write_json(payload: Any, target: str | Path | None = None) -> str:
    """Serialize with the configured indent; write to target unless stdout."""
    text = json.dumps(payload, indent=get_settings().JSON_INDENT, ensure_ascii=False)
    if target is None or str(target) == STDIO:
        sys.stdout.write(text + "\n")
    else:
        Path(target).write_text(text + "\n", encoding="utf-8")
    return text


def series_payload(h: Series) -> dict:
    return dump_model(series_to_schema(h))


def bimodule_payload(M: Bimodule) -> dict:
    return dump_model(bimodule_to_schema(M))


def generator_map_payload(phi: GeneratorMap) -> dict[str, dict]:
    """Image of every source generator, in generator order."""
    return {name: series_payload(phi.images[name]) for name in phi.source.names}
