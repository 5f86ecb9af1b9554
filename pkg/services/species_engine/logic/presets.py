"""
Shipped division algebra tables and the JSON descriptor parser.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from fractions import Fraction
from math import isqrt
from typing import Any

from common.errors import ErrorCodes
from common.exceptions import ValidationError
from services.species_engine.logic.division_algebra import DivisionAlgebra
from services.species_engine.logic.fields import QQ, GroundField, PrimeField

logger = logging.getLogger(__name__)

UNIT = "1"


def rational(field: GroundField = QQ) -> DivisionAlgebra:
    """The ground field itself (d = 1)."""
    one = field.one
    return DivisionAlgebra(
        name=field.name,
        field=field,
        basis=(UNIT,),
        products={(UNIT, UNIT): {UNIT: one}},
        inverses={UNIT: {UNIT: one}},
        preset="rational",
    )


def quadratic(m: int, field: GroundField = QQ) -> DivisionAlgebra:
    """F(sqrt m) with basis {1, sqrt m}."""
    if m == 0 or _is_square(m, field):
        raise ValidationError(
            ErrorCodes.NOT_A_DIVISION_ALGEBRA,
            f"{m} is a square in {field.name}; F(sqrt {m}) is not a field",
        )
    r = f"sqrt{m}"
    one, mm = field.one, field.coerce(m)
    return DivisionAlgebra(
        name=f"{field.name}(sqrt{m})",
        field=field,
        basis=(UNIT, r),
        products={
            (UNIT, UNIT): {UNIT: one},
            (UNIT, r): {r: one},
            (r, UNIT): {r: one},
            (r, r): {UNIT: mm},
        },
        inverses={UNIT: {UNIT: one}, r: {r: one / mm}},
        preset={"quadratic": m},
    )


def quaternion(field: GroundField = QQ) -> DivisionAlgebra:
    """Hamilton quaternions over Q with basis {1, i, j, k}."""
    if field.characteristic != 0:
        raise ValidationError(
            ErrorCodes.NOT_A_DIVISION_ALGEBRA,
            f"the quaternion preset is a division algebra only over Q, "
            f"not {field.name}",
        )
    one = field.one
    # i*j = k, j*k = i, k*i = j
    cycle = {("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j"}
    products: dict[tuple[str, str], dict[str, Fraction]] = {}
    for s in (UNIT, "i", "j", "k"):
        products[UNIT, s] = {s: one}
        products[s, UNIT] = {s: one}
    for s in ("i", "j", "k"):
        products[s, s] = {UNIT: -one}
    for (s, t), u in cycle.items():
        products[s, t] = {u: one}
        products[t, s] = {u: -one}
    return DivisionAlgebra(
        name="H",
        field=field,
        basis=(UNIT, "i", "j", "k"),
        products=products,
        inverses={
            UNIT: {UNIT: one},
            "i": {"i": -one},
            "j": {"j": -one},
            "k": {"k": -one},
        },
        preset="quaternion",
    )


def explicit(
    field: GroundField,
    basis: list[str],
    mul_table: dict[str, dict[str, dict[str, str]]],
    inv_table: dict[str, dict[str, str]],
    name: str | None = None,
) -> DivisionAlgebra:
    """Algebra from explicit tables; scalars are fraction strings."""
    products = {
        (s, t): {u: field.parse(c) for u, c in row.items() if field.parse(c)}
        for s, inner in mul_table.items()
        for t, row in inner.items()
    }
    inverses = {
        s: {u: field.parse(c) for u, c in row.items() if field.parse(c)}
        for s, row in inv_table.items()
    }
    return DivisionAlgebra(
        name=name or f"D{len(basis)}",
        field=field,
        basis=tuple(basis),
        products=products,
        inverses=inverses,
    )


def algebra_from_descriptor(
    desc: Any, field: GroundField, path: str = "species"
) -> DivisionAlgebra:
    """
    Build and validate a division algebra from its JSON descriptor.

    Accepted forms: "rational", "quaternion", {"quadratic": m},
    {"preset": ...} wrapping any of those, or an explicit
    {"dim", "basis", "mul_table", "inv_table"} table.
    """
    if isinstance(desc, dict) and "preset" in desc:
        desc = desc["preset"]
    if desc == "rational":
        algebra = rational(field)
    elif desc == "quaternion":
        algebra = quaternion(field)
    elif isinstance(desc, dict) and "quadratic" in desc:
        algebra = quadratic(int(desc["quadratic"]), field)
    elif isinstance(desc, dict) and "basis" in desc:
        if int(desc.get("dim", len(desc["basis"]))) != len(desc["basis"]):
            raise ValidationError(
                ErrorCodes.INVALID_TABLE, "dim does not match basis", path=f"{path}.dim"
            )
        algebra = explicit(
            field, desc["basis"], desc["mul_table"], desc["inv_table"], desc.get("name")
        )
        algebra = replace(algebra, preset=dict(desc))
    else:
        raise ValidationError(
            ErrorCodes.INVALID_INPUT, f"unknown algebra descriptor {desc!r}", path=path
        )

    problems = algebra.violations()
    if problems:
        code = (
            ErrorCodes.CHARACTERISTIC_DIVIDES_DIMENSION
            if any("condition (b)" in p for p in problems)
            else ErrorCodes.INVALID_TABLE
        )
        raise ValidationError(code, "; ".join(problems), path=path)
    logger.debug(f"Loaded algebra {algebra.name} (dim {algebra.dim})")
    return algebra


def _is_square(m: int, field: GroundField) -> bool:
    if isinstance(field, PrimeField):
        return field.is_square(m)
    return m > 0 and isqrt(m) ** 2 == m
