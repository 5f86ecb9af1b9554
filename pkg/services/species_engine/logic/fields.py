"""
Ground fields.

Scalars are plain Python numbers: ``Fraction`` over the rationals and
:class:`ModP` over a prime field. Both support the arithmetic operators
and mix with ``int``, so the rest of the engine never branches on the field.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from common.errors import ErrorCodes
from common.exceptions import ValidationError


@dataclass(frozen=True, slots=True, eq=False)
class ModP:
    """Element of the prime field with p elements."""

    value: int
    p: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other: Any) -> int | None:
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"cannot mix GF({self.p}) and GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return None

    def __add__(self, other: Any) -> ModP:
        o = self._other(other)
        return NotImplemented if o is None else ModP(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other: Any) -> ModP:
        o = self._other(other)
        return NotImplemented if o is None else ModP(self.value - o, self.p)

    def __rsub__(self, other: Any) -> ModP:
        o = self._other(other)
        return NotImplemented if o is None else ModP(o - self.value, self.p)

    def __mul__(self, other: Any) -> ModP:
        o = self._other(other)
        return NotImplemented if o is None else ModP(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> ModP:
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return ModP(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other: Any) -> ModP:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return ModP(o, self.p) / self

    def __neg__(self) -> ModP:
        return ModP(-self.value, self.p)

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ModP):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.p))

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"ModP({self.value}, {self.p})"


Scalar = Fraction | ModP


class GroundField(ABC):
    """Exact ground field F."""

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def characteristic(self) -> int:
        pass

    @abstractmethod
    def coerce(self, value: Any) -> Scalar:
        """Convert an int, Fraction or field element into this field."""
        pass

    @abstractmethod
    def descriptor(self) -> str | dict[str, int]:
        """JSON descriptor understood by :func:`field_from_descriptor`."""
        pass

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    @property
    def is_infinite(self) -> bool:
        return self.characteristic == 0

    def parse(self, text: str) -> Scalar:
        """Parse an exact scalar string such as "3", "-3/2"."""
        try:
            return self.coerce(Fraction(str(text).strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(
                ErrorCodes.INVALID_INPUT, f"invalid scalar '{text}'"
            ) from e

    def format(self, value: Scalar) -> str:
        return str(value)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroundField) and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.name}>"


class RationalField(GroundField):
    @property
    def name(self) -> str:
        return "Q"

    @property
    def characteristic(self) -> int:
        return 0

    def coerce(self, value: Any) -> Fraction:
        if isinstance(value, ModP):
            raise ValueError("cannot coerce a prime field element into Q")
        return Fraction(value)

    def descriptor(self) -> str:
        return "rational"


class PrimeField(GroundField):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValidationError(
                ErrorCodes.INVALID_INPUT, f"{p} is not a prime", path="field.prime"
            )
        self.p = p

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    @property
    def characteristic(self) -> int:
        return self.p

    def coerce(self, value: Any) -> ModP:
        if isinstance(value, ModP):
            if value.p != self.p:
                raise ValueError(f"cannot coerce GF({value.p}) into {self.name}")
            return value
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} has no image in {self.name}")
            return ModP(value.numerator * pow(value.denominator, -1, self.p), self.p)
        return ModP(int(value), self.p)

    def descriptor(self) -> dict[str, int]:
        return {"prime": self.p}

    def is_square(self, value: Scalar) -> bool:
        v = self.coerce(value).value
        if v == 0 or self.p == 2:
            return True
        return pow(v, (self.p - 1) // 2, self.p) == 1


QQ = RationalField()


def field_from_descriptor(desc: str | dict[str, int] | None) -> GroundField:
    """Build a ground field from its JSON descriptor ("rational" or {"prime": p})."""
    if desc is None or desc == "rational":
        return QQ
    if isinstance(desc, dict) and "prime" in desc:
        return PrimeField(int(desc["prime"]))
    raise ValidationError(
        ErrorCodes.INVALID_INPUT, f"unknown field descriptor {desc!r}", path="field"
    )
