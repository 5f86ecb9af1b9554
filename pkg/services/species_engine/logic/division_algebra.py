"""
Division algebras presented by structure constants.

An algebra element is a dict ``label -> scalar`` over the distinguished basis
L; the first label is the unit. Tables are validated, not trusted: see
:meth:`DivisionAlgebra.violations`.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from services.species_engine.logic.fields import GroundField, Scalar
from services.species_engine.logic.linalg import EchelonBasis, add_scaled

AlgebraElement = dict[str, Scalar]


@dataclass(frozen=True, eq=False)
class DivisionAlgebra:
    """
    One factor D of a species.

    Attributes:
        name: Display name ("Q", "Q(sqrt2)", "H").
        field: Ground field F.
        basis: Labels of L, unit first.
        products: (s, t) -> expansion of s*t over L.
        inverses: s -> expansion of s^-1 over L.
        preset: JSON descriptor when built from a preset, else None.
    """

    name: str
    field: GroundField
    basis: tuple[str, ...]
    products: Mapping[tuple[str, str], Mapping[str, Scalar]]
    inverses: Mapping[str, Mapping[str, Scalar]]
    preset: Any = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def unit(self) -> str:
        return self.basis[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DivisionAlgebra):
            return NotImplemented
        return (
            self.field == other.field
            and self.basis == other.basis
            and self._table_key == other._table_key
        )

    def __hash__(self) -> int:
        return hash((self.field, self.basis))

    @cached_property
    def _table_key(self) -> tuple:
        return (
            tuple(
                sorted((k, tuple(sorted(v.items()))) for k, v in self.products.items())
            ),
            tuple(
                sorted((k, tuple(sorted(v.items()))) for k, v in self.inverses.items())
            ),
        )

    # =========================================================================
    # Arithmetic
    # =========================================================================

    def element(self, coeffs: Mapping[str, Any]) -> AlgebraElement:
        return {
            s: self.field.coerce(c) for s, c in coeffs.items() if self.field.coerce(c)
        }

    def basis_element(self, s: str) -> AlgebraElement:
        return {s: self.field.one}

    def mul_labels(self, s: str, t: str) -> Mapping[str, Scalar]:
        return self.products.get((s, t), {})

    def mul(self, x: Mapping[str, Scalar], y: Mapping[str, Scalar]) -> AlgebraElement:
        result: AlgebraElement = {}
        for s, cs in x.items():
            for t, ct in y.items():
                add_scaled(result, self.mul_labels(s, t), cs * ct)
        return result

    def inv_basis(self, s: str) -> AlgebraElement:
        return dict(self.inverses[s])

    def dual_apply(self, s: str, x: Mapping[str, Scalar]) -> Scalar:
        """s*(x): coefficient of s in x."""
        return x.get(s, self.field.zero)

    def inverse_dual_apply(self, s: str, x: Mapping[str, Scalar]) -> Scalar:
        """(s^-1)*(x): coefficient of s^-1 when x is expanded over {t^-1}."""
        total = self.field.zero
        for u, cu in x.items():
            total += cu * self._inverse_coordinates[u].get(s, 0)
        return total

    @cached_property
    def _inverse_coordinates(self) -> dict[str, dict[str, Scalar]]:
        # u = sum_s c[u][s] * s^-1
        solver = EchelonBasis(sort_key=self.basis.index, track=True)
        for s in self.basis:
            solver.add(self.inverses[s], tag=s)
        coords = {}
        for u in self.basis:
            combo = solver.express(self.basis_element(u))
            if combo is None:
                raise ValueError(f"inverse basis of {self.name} is not a basis")
            coords[u] = combo
        return coords

    # =========================================================================
    # Validation
    # =========================================================================

    def violations(self, check_semi_multiplicative: bool = False) -> list[str]:
        """Every violated table invariant, as human-readable strings."""
        problems: list[str] = []
        labels = set(self.basis)
        if not self.basis:
            return ["empty basis"]
        if len(labels) != len(self.basis):
            problems.append("duplicate basis labels")
        for (s, t), value in self.products.items():
            if s not in labels or t not in labels or not set(value) <= labels:
                problems.append(f"product {s}*{t} uses unknown labels")
        for s in self.basis:
            if s not in self.inverses:
                problems.append(f"missing inverse of {s}")
            elif not set(self.inverses[s]) <= labels:
                problems.append(f"inverse of {s} uses unknown labels")
        if problems:
            return problems

        e = self.unit
        for s in self.basis:
            if self.mul_labels(e, s) != {s: 1} or self.mul_labels(s, e) != {s: 1}:
                problems.append(f"{e} is not a two-sided unit for {s}")
        for s, t, u in itertools.product(self.basis, repeat=3):
            left = self.mul(self.mul_labels(s, t), {u: 1})
            right = self.mul({s: 1}, self.mul_labels(t, u))
            if left != right:
                problems.append(f"associativity fails on ({s},{t},{u})")
        for s in self.basis:
            inv = self.inverses[s]
            if self.mul({s: 1}, inv) != {e: 1} or self.mul(inv, {s: 1}) != {e: 1}:
                problems.append(f"stored inverse of {s} is wrong")
        for s, t in itertools.permutations(self.basis, 2):
            inv_t = self.inverses[t]
            if self.dual_apply(e, self.mul({s: 1}, inv_t)):
                problems.append(f"condition (a) fails: e*({s}*{t}^-1) != 0")
            if self.dual_apply(e, self.mul(inv_t, {s: 1})):
                problems.append(f"condition (a) fails: e*({t}^-1*{s}) != 0")
        p = self.field.characteristic
        if p and self.dim % p == 0:
            problems.append(
                f"condition (b) fails: char {p} divides dimension {self.dim}"
            )
        solver = EchelonBasis(sort_key=self.basis.index)
        if solver.extend(self.inverses[s] for s in self.basis) != self.dim:
            problems.append("inverses of basis labels are linearly dependent")
        if check_semi_multiplicative and not self.is_semi_multiplicative():
            problems.append("basis is not semi-multiplicative")
        return problems

    def is_semi_multiplicative(self) -> bool:
        """True if every product of basis labels is a multiple of one label."""
        return all(
            len(self.mul_labels(s, t)) <= 1
            for s, t in itertools.product(self.basis, repeat=2)
        )

    def dual_basis_violations(self) -> list[str]:
        """
        Check the four dual-pair identities between L and {s^-1}.

        For all s, t, t1, r, r1, s1 in L:
            sum_r (r^-1)*(t1^-1 s^-1) r*(st) = [t = t1]
            sum_t r*(st) (r1^-1)*(t^-1 s^-1) = [r = r1]
            sum_r (r^-1)*(t^-1 s1^-1) r*(st) = [s = s1]
            sum_s r*(st) (r1^-1)*(t^-1 s^-1) = [r = r1]
        """
        one, zero = self.field.one, self.field.zero
        L = self.basis
        prod = {(s, t): self.mul_labels(s, t) for s in L for t in L}
        inv_prod = {
            (t, s): self.mul(self.inverses[t], self.inverses[s]) for t in L for s in L
        }
        problems = []

        def delta(x: str, y: str) -> Scalar:
            return one if x == y else zero

        for s, t, t1 in itertools.product(L, repeat=3):
            total = sum(
                (
                    self.inverse_dual_apply(r, inv_prod[t1, s])
                    * self.dual_apply(r, prod[s, t])
                    for r in L
                ),
                zero,
            )
            if total != delta(t, t1):
                problems.append(f"first identity fails at s={s}, t={t}, t1={t1}")
        for s, r, r1 in itertools.product(L, repeat=3):
            total = sum(
                (
                    self.dual_apply(r, prod[s, t])
                    * self.inverse_dual_apply(r1, inv_prod[t, s])
                    for t in L
                ),
                zero,
            )
            if total != delta(r, r1):
                problems.append(f"second identity fails at s={s}, r={r}, r1={r1}")
        for s, s1, t in itertools.product(L, repeat=3):
            total = sum(
                (
                    self.inverse_dual_apply(r, inv_prod[t, s1])
                    * self.dual_apply(r, prod[s, t])
                    for r in L
                ),
                zero,
            )
            if total != delta(s, s1):
                problems.append(f"third identity fails at s={s}, s1={s1}, t={t}")
        for t, r, r1 in itertools.product(L, repeat=3):
            total = sum(
                (
                    self.dual_apply(r, prod[s, t])
                    * self.inverse_dual_apply(r1, inv_prod[t, s])
                    for s in L
                ),
                zero,
            )
            if total != delta(r, r1):
                problems.append(f"fourth identity fails at t={t}, r={r}, r1={r1}")
        return problems

    def __repr__(self) -> str:
        return f"<DivisionAlgebra {self.name} over {self.field.name}, dim {self.dim}>"


def validate_table(table: DivisionAlgebra) -> list[str]:
    """Report of violated invariants; empty means valid."""
    try:
        return table.violations()
    except ValueError as e:
        return [str(e)]
