"""Coordinate primes and orders of polynomials/ideals along them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from maxmult.errors import UndefinedOrderError
from maxmult.ring import Ideal, Polynomial, RingSpec


@dataclass(frozen=True)
class CoordinatePrime:
    """The prime ⟨v - a_v : v in vars⟩, with a_v taken from ``translate``.

    ``translate`` is the substitution ``v -> v + a_v`` that moves the prime
    to one generated by plain variables.
    """

    vars: tuple
    translate: tuple = field(default=())

    def __init__(self, vars, translate: Mapping | None = None):
        object.__setattr__(self, "vars", tuple(vars))
        items = tuple(sorted((translate or {}).items()))
        object.__setattr__(self, "translate", items)
        if not self.vars:
            raise ValueError("coordinate prime needs at least one variable")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variables in {self.vars}")

    @classmethod
    def origin(cls, ring: RingSpec) -> "CoordinatePrime":
        return cls(ring.variables)

    @property
    def shift(self) -> dict:
        return dict(self.translate)

    def check(self, ring: RingSpec) -> None:
        for v in self.vars:
            ring.index(v)
        for v, _ in self.translate:
            ring.index(v)

    def is_closed_point(self, ring: RingSpec) -> bool:
        return set(self.vars) == set(ring.variables)

    def generators(self, ring: RingSpec) -> Ideal:
        self.check(ring)
        shift = self.shift
        return Ideal(ring, [ring.var(v) - ring.const(shift.get(v, 0)) for v in self.vars])

    def restrict(self, ring: RingSpec) -> "CoordinatePrime | None":
        """The prime generated by the variables that live in ``ring``."""
        keep = [v for v in self.vars if v in ring.variables]
        if not keep:
            return None
        shift = {v: a for v, a in self.translate if v in ring.variables}
        return CoordinatePrime(keep, shift)

    def with_vars(self, extra) -> "CoordinatePrime":
        return CoordinatePrime(self.vars + tuple(v for v in extra if v not in self.vars),
                               self.shift)

    def to_text(self, labels: Mapping[str, str] | None = None) -> str:
        labels = labels or {}
        shift = self.shift
        parts = []
        for v in self.vars:
            name = labels.get(v, v)
            a = shift.get(v, 0)
            if a:
                parts.append(f"{name} - {a}" if a > 0 else f"{name} + {-a}")
            else:
                parts.append(name)
        return "⟨" + ",".join(parts) + "⟩"

    def as_dict(self) -> dict:
        d = {"vars": list(self.vars)}
        if self.translate:
            d["translate"] = {v: _jsonable(a) for v, a in self.translate}
        return d

    def __str__(self):
        return self.to_text()


def _jsonable(a):
    from fractions import Fraction
    if isinstance(a, Fraction):
        return str(a) if a.denominator != 1 else a.numerator
    return a


def order_at_coordinate_prime(f: Polynomial, prime: CoordinatePrime) -> int:
    """Largest n with f ∈ prime^n: least prime-variable degree after translation."""
    prime.check(f.ring)
    g = f.translate(prime.shift)
    if g.is_zero():
        raise UndefinedOrderError("order of the zero polynomial is infinite")
    idx = [f.ring.index(v) for v in prime.vars]
    return min(sum(e[i] for i in idx) for e in g.terms)


def ideal_order_at_coordinate_prime(ideal: Ideal, prime: CoordinatePrime) -> int:
    if ideal.is_zero():
        raise UndefinedOrderError("order of the zero ideal is infinite")
    return min(order_at_coordinate_prime(g, prime) for g in ideal.generators)


def contains_point(ideal: Ideal, prime: CoordinatePrime) -> bool:
    """True when V(ideal) contains V(prime): every generator has order >= 1."""
    return all(order_at_coordinate_prime(g, prime) >= 1 for g in ideal.generators)
