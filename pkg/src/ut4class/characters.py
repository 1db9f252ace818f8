"""Multiplicative characters with exact formal values.

Character values live in the multiplicative group generated by an
explicit root of unity part and formal symbols.  A symbol stands for a
fixed but generic nonzero complex number; ``on_circle`` symbols have
modulus one without being roots of unity, other symbols have modulus
different from one.  Distinct symbols are treated as multiplicatively
independent, so two values are equal exactly when their torsion parts
and exponent vectors agree.  Exponents are Fractions because root
extraction (used when moving a character along a finite-index step)
divides them.

A character is stored by its values on the canonical generators of its
domain subgroup.  Evaluation extracts the coordinates of an element
along those generators; the result is a homomorphism exactly when the
values kill the derived subgroup, which ``validate`` checks.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import Elt, conjugate, inverse
from .subgroup import (
    Subgroup,
    conjugate_subgroup,
    derived_subgroup,
    member_exponents,
)


@dataclass(frozen=True)
class ValueSymbol:
    """A generic nonzero complex parameter.

    on_circle=True declares modulus exactly one (but not a root of
    unity); on_circle=False declares modulus different from one.
    """

    name: str
    on_circle: bool = False


def _norm_exps(items) -> tuple[tuple[ValueSymbol, Fraction], ...]:
    acc: dict[str, tuple[ValueSymbol, Fraction]] = {}
    for sym, ex in items:
        ex = Fraction(ex)
        if sym.name in acc:
            prev_sym, prev = acc[sym.name]
            if prev_sym != sym:
                raise ValueError(f"conflicting declarations for symbol {sym.name!r}")
            ex = prev + ex
        if ex:
            acc[sym.name] = (sym, ex)
        else:
            acc.pop(sym.name, None)
    return tuple(acc[k] for k in sorted(acc))


@dataclass(frozen=True)
class UnitValue:
    """torsion part exp(2*pi*i*torsion) times a product of symbol powers."""

    torsion: Fraction = Fraction(0)
    exps: tuple[tuple[ValueSymbol, Fraction], ...] = ()

    def __mul__(self, other: "UnitValue") -> "UnitValue":
        return UnitValue((self.torsion + other.torsion) % 1,
                         _norm_exps(self.exps + other.exps))

    def __truediv__(self, other: "UnitValue") -> "UnitValue":
        return self * other ** -1

    def __pow__(self, r) -> "UnitValue":
        r = Fraction(r)
        return UnitValue((self.torsion * r) % 1,
                         _norm_exps((s, e * r) for s, e in self.exps))

    def roots(self, m: int) -> list["UnitValue"]:
        """All m-th roots (principal root twisted by each m-th root of unity)."""
        if m <= 0:
            raise ValueError("root order must be positive")
        pr = self ** Fraction(1, m)
        return [pr * root_of_unity(k, m) for k in range(m)]

    @property
    def is_one(self) -> bool:
        return self.torsion == 0 and not self.exps

    @property
    def is_root_of_unity(self) -> bool:
        return not self.exps

    def value_order(self) -> int | None:
        """Multiplicative order, or None when infinite."""
        return self.torsion.denominator if self.is_root_of_unity else None

    def modulus_class(self) -> str:
        """'off_circle', 'circle_free' (modulus one, infinite order) or 'torsion'."""
        if any(not s.on_circle and e for s, e in self.exps):
            return "off_circle"
        if self.exps:
            return "circle_free"
        return "torsion"

    @property
    def on_unit_circle(self) -> bool:
        return self.modulus_class() != "off_circle"

    def numeric(self, assign: Mapping[str, complex]) -> complex:
        """Numeric value for concrete symbol assignments (principal branches)."""
        out = cmath.exp(2j * cmath.pi * float(self.torsion))
        for s, e in self.exps:
            out *= cmath.exp(float(e) * cmath.log(complex(assign[s.name])))
        return out

    def __str__(self) -> str:
        parts = []
        if self.torsion:
            parts.append(f"zeta({self.torsion})")
        for s, e in self.exps:
            parts.append(s.name if e == 1 else f"{s.name}^{e}")
        return " * ".join(parts) if parts else "1"


ONE = UnitValue()


def root_of_unity(num, den=1) -> UnitValue:
    """exp(2*pi*i*num/den)."""
    return UnitValue(Fraction(num, den) % 1, ())


def symbol_value(sym: ValueSymbol, exp=1) -> UnitValue:
    return UnitValue(Fraction(0), _norm_exps([(sym, Fraction(exp))]))


@dataclass(frozen=True)
class Character:
    """Values on the canonical generators of the domain subgroup.

    vals1 aligns with sub.gens1, vals2 with sub.gens2, val_c is the
    value on elt(c=sub.c0) (ONE when the centre part is trivial).
    """

    sub: Subgroup
    vals1: tuple[UnitValue, ...]
    vals2: tuple[UnitValue, ...]
    val_c: UnitValue

    def validate(self) -> None:
        """Raise ValueError unless the values define a homomorphism."""
        for d in derived_subgroup(self.sub).generators():
            if not evaluate(self, d).is_one:
                raise ValueError("values do not kill the derived subgroup")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except ValueError:
            return False
        return True


def character(
    sub: Subgroup,
    vals1: Sequence[UnitValue] = (),
    vals2: Sequence[UnitValue] = (),
    val_c: UnitValue = ONE,
) -> Character:
    if len(vals1) != len(sub.gens1) or len(vals2) != len(sub.gens2):
        raise ValueError("value count does not match the canonical generators")
    return Character(sub, tuple(vals1), tuple(vals2), val_c)


def evaluate(chi: Character, g: Elt) -> UnitValue:
    got = member_exponents(chi.sub, g)
    if got is None:
        raise ValueError("element outside the character's domain")
    q1, q2, qc = got
    out = ONE
    for q, v in zip(q1, chi.vals1):
        if q:
            out = out * v ** q
    for q, v in zip(q2, chi.vals2):
        if q:
            out = out * v ** q
    if qc:
        out = out * chi.val_c ** qc
    return out


def conjugate_character(chi: Character, g: Elt) -> Character:
    """chi^g with (chi^g)(x) = chi(g x g^-1), defined on g^-1 (dom) g."""
    dom = conjugate_subgroup(chi.sub, inverse(g))
    vals1 = tuple(evaluate(chi, conjugate(t, g)) for t in dom.gens1)
    vals2 = tuple(evaluate(chi, conjugate(s, g)) for s in dom.gens2)
    # conjugation fixes the centre pointwise
    val_c = evaluate(chi, Elt(0, 0, 0, 0, 0, dom.c0)) if dom.c0 else ONE
    return Character(dom, vals1, vals2, val_c)


def restrict(chi: Character, sub: Subgroup) -> Character:
    """Restriction to a subgroup of the domain."""
    vals1 = tuple(evaluate(chi, t) for t in sub.gens1)
    vals2 = tuple(evaluate(chi, s) for s in sub.gens2)
    val_c = evaluate(chi, Elt(0, 0, 0, 0, 0, sub.c0)) if sub.c0 else ONE
    return Character(sub, vals1, vals2, val_c)
