"""Presented finite extensions S[Z_1..Z_m]/(f_1(Z_1), ..., f_m(Z_m))."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from maxmult.ring import Ideal, Polynomial, RingSpec


@dataclass(frozen=True)
class Tower:
    """A tower over the polynomial ring k[base_vars] (modulo base_relations).

    ``steps`` holds ``(Z, f)`` with ``f`` monic in ``Z`` of degree >= 1 and
    coefficients in the base variables and earlier ``Z``'s.  All polynomials
    live in :attr:`ring`.
    """

    ring: RingSpec
    base_vars: tuple
    steps: tuple
    base_relations: tuple = ()

    def __post_init__(self):
        zvars = [z for z, _ in self.steps]
        expected = tuple(self.base_vars) + tuple(zvars)
        if self.ring.variables != expected:
            raise ValueError(f"ring variables {self.ring.variables} != base + Z {expected}")
        allowed = set(self.base_vars)
        for z, f in self.steps:
            if f.ring != self.ring:
                raise ValueError("relation lives in the wrong ring")
            d = f.degree_in(z)
            if d < 1:
                raise ValueError(f"relation for {z} has degree {d} in {z}")
            lead = f.coefficients_in(z)[d]
            if lead != self.ring.one():
                raise ValueError(f"relation for {z} is not monic in {z}: {f.to_text()}")
            extra = f.support() - allowed - {z}
            if extra:
                raise ValueError(f"relation for {z} uses later variables {sorted(extra)}")
            allowed.add(z)
        for g in self.base_relations:
            if g.support() - set(self.base_vars):
                raise ValueError(f"base relation {g.to_text()} uses non-base variables")

    @classmethod
    def build(cls, char: int, base_vars: Sequence[str], steps: Iterable = (),
              base_relations: Iterable[str] = ()) -> "Tower":
        steps = list(steps)
        ring = RingSpec(char, tuple(base_vars) + tuple(z for z, _ in steps))
        rels = tuple((z, ring.parse(t) if isinstance(t, str) else t) for z, t in steps)
        base = tuple(ring.parse(t) if isinstance(t, str) else t for t in base_relations)
        return cls(ring, tuple(base_vars), rels, tuple(g for g in base if g))

    @classmethod
    def from_dict(cls, d: dict) -> "Tower":
        return cls.build(int(d.get("char", 0)), d["base_vars"],
                         [(s["var"], s["relation"]) for s in d.get("steps", [])],
                         d.get("base_relations", []))

    def as_dict(self) -> dict:
        return {"char": self.ring.characteristic, "base_vars": list(self.base_vars),
                "base_relations": [g.to_text() for g in self.base_relations],
                "steps": [{"var": z, "relation": f.to_text()} for z, f in self.steps]}

    @property
    def zvars(self) -> tuple:
        return tuple(z for z, _ in self.steps)

    @property
    def relations(self) -> tuple:
        return tuple(f for _, f in self.steps)

    @property
    def degrees(self) -> tuple:
        return tuple(f.degree_in(z) for z, f in self.steps)

    @property
    def rank(self) -> int:
        r = 1
        for d in self.degrees:
            r *= d
        return r

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    def base_ring(self) -> RingSpec:
        return RingSpec(self.ring.characteristic, self.base_vars)

    def ideal(self) -> Ideal:
        """Defining ideal of the tower in its ambient polynomial ring."""
        return Ideal(self.ring, list(self.base_relations) + list(self.relations))

    def extend(self, steps: Iterable) -> "Tower":
        """Append further relations (``(Z, text or Polynomial)``)."""
        steps = list(steps)
        ring = self.ring.extend([z for z, _ in steps])
        old = [(z, f.change_ring(ring)) for z, f in self.steps]
        new = [(z, ring.parse(t) if isinstance(t, str) else t.change_ring(ring)) for z, t in steps]
        return Tower(ring, self.base_vars, tuple(old + new),
                     tuple(g.change_ring(ring) for g in self.base_relations))

    def lower(self, k: int) -> "Tower":
        """The sub-tower built from the first ``k`` relations."""
        keep = self.steps[:k]
        ring = RingSpec(self.ring.characteristic, tuple(self.base_vars) + tuple(z for z, _ in keep))
        return Tower(ring, self.base_vars, tuple((z, f.change_ring(ring)) for z, f in keep),
                     tuple(g.change_ring(ring) for g in self.base_relations))

    def to_text(self, labels=None) -> str:
        labels = labels or {}
        names = [labels.get(v, v) for v in self.ring.variables]
        base = ",".join(names[: len(self.base_vars)])
        rels = "; ".join(f.to_text(names) for f in list(self.base_relations) + list(self.relations))
        return f"k[{','.join(names)}]/⟨{rels}⟩ over k[{base}]" if rels else f"k[{base}]"
