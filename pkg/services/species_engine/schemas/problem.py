"""
Pydantic schemas for problem files and emitted series / bimodules.
"""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

# ============================================================================
# Series Schemas
# ============================================================================


class TermSchema(BaseModel):
    """One monomial: coeff * (s_0 a_1)(s_1 a_2)...(s_{d-1} a_d) tail."""

    model_config = ConfigDict(extra="forbid")

    coeff: str = Field("1", examples=["-3/2"], description="Exact scalar")
    word: list[tuple[str, str]] = Field(
        default_factory=list,
        description="(basis label, generator) pairs; empty for degree 0",
        examples=[[["1", "a"], ["sqrt2", "b"]]],
    )
    tail: str | None = Field(None, description="Basis label after the last arrow")
    vertex: int | None = Field(
        None, ge=1, description="Vertex of a degree-0 term (word empty)"
    )

    @field_validator("coeff", mode="before")
    @classmethod
    def coeff_as_text(cls, v: Any) -> str:
        if isinstance(v, bool):
            raise ValueError("coefficient must be a number or a fraction string")
        return str(v)


class SeriesSchema(BaseModel):
    """A truncated series or potential."""

    model_config = ConfigDict(extra="forbid")

    degree: int | None = Field(None, ge=0, description="Truncation N")
    terms: list[TermSchema] = Field(default_factory=list)


# ============================================================================
# Problem Schemas
# ============================================================================


class ArrowSchema(BaseModel):
    """Generator x with x in e_from M e_to."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    name: str = Field(..., min_length=1, examples=["a"])
    from_: int = Field(..., alias="from", ge=1)
    to: int = Field(..., ge=1)


class ProblemFile(BaseModel):
    """Input accepted by every subcommand."""

    model_config = ConfigDict(extra="forbid")

    field: str | dict[str, int] = Field(
        "rational", description='"rational" or {"prime": p}'
    )
    species: list[Any] = Field(
        ...,
        min_length=1,
        description="Algebra descriptors, one per vertex",
        examples=[["rational", {"quadratic": 2}]],
    )
    arrows: list[ArrowSchema] = Field(default_factory=list)
    potential: SeriesSchema | None = None
    degree: int | None = Field(None, ge=0)


# ============================================================================
# Output Schemas
# ============================================================================


class BimoduleSchema(BaseModel):
    """Emitted bimodule: re-parses as the species/arrows part of a problem."""

    model_config = ConfigDict(populate_by_name=True)

    field: str | dict[str, int]
    species: list[Any]
    arrows: list[ArrowSchema]
    block_dims: dict[str, int] = Field(
        default_factory=dict, description='F-dimension of e_i M e_j, keyed "i,j"'
    )
