"""Maximum-multiplicity strata of towers and a brute-force multiplicity oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

from maxmult.errors import FiberDataError, NonPrimaryError, NotYetPolynomialError
from maxmult.groebner import (
    groebner_basis,
    is_unit_ideal,
    krull_dimension,
    radical_contains,
    saturate,
    standard_monomial_count,
)
from maxmult.points import CoordinatePrime
from maxmult.rees import ReesAlgebra, diff_saturate, in_sing, sing_locus
from maxmult.ring import Ideal, RingSpec
from maxmult.tower import Tower

DEFAULT_N_RANGE = 8
_MAX_LOCALIZATION = 64


def presentation_algebra(t: Tower):
    """The ambient ring and [f_1 W^{d_1}, ..., f_m W^{d_m}]."""
    gens = [(f, f.degree_in(z)) for z, f in t.steps]
    return t.ring, ReesAlgebra(t.ring, gens)


@dataclass
class StratumReport:
    presentation: ReesAlgebra
    saturated: ReesAlgebra
    stratum_ideal: Ideal
    expected_mult: int
    nonempty: bool

    def summary(self) -> str:
        if self.nonempty:
            return f"max mult = {self.expected_mult}, stratum V{self.stratum_ideal.to_text()}"
        return f"max mult < {self.expected_mult} (presentation stratum empty)"

    def as_dict(self) -> dict:
        return {"presentation": self.presentation.as_dict()["gens"],
                "saturated": self.saturated.as_dict()["gens"],
                "stratum_ideal": self.stratum_ideal.texts(),
                "expected_mult": self.expected_mult, "nonempty": self.nonempty}


def _require_regular_base(t: Tower):
    if t.base_relations:
        raise ValueError("the stratum of a tower is only computed over a polynomial base")


def max_mult_stratum(t: Tower) -> StratumReport:
    _require_regular_base(t)
    _, G = presentation_algebra(t)
    S = diff_saturate(G)
    ideal = Ideal(t.ring, groebner_basis(sing_locus(S)).basis)
    return StratumReport(G, S, ideal, t.rank, not is_unit_ideal(ideal))


def stratum_contains(t: Tower, p: CoordinatePrime) -> bool:
    """p lies in F_rank: each saturated generator has order >= its weight at p."""
    _require_regular_base(t)
    _, G = presentation_algebra(t)
    return in_sing(diff_saturate(G), p)


# -- Hilbert-Samuel oracle -------------------------------------------------------

def _translated(ideal: Ideal, shift: dict) -> Ideal:
    return Ideal(ideal.ring, [g.translate(shift) for g in ideal.generators])


def _origin_isolated(J: Ideal) -> bool:
    """The origin is an isolated point of V(J) (and lies on it)."""
    ring = J.ring
    M = Ideal(ring, list(ring.gens()))
    if is_unit_ideal(J + M):
        return False
    for v in ring.gens():
        if not is_unit_ideal(saturate(J, v) + M):
            return False
    return True


def _local_length(J: Ideal, M: Ideal, start: int) -> int:
    """Length of (k[x]/J) localized at the origin (origin assumed isolated)."""
    prev = standard_monomial_count(J + M ** start)
    N = start
    while N < _MAX_LOCALIZATION:
        N += 1
        cur = standard_monomial_count(J + M ** N)
        if cur == prev:
            return cur
        prev = cur
    raise NotYetPolynomialError("local length did not stabilize; the point is not isolated")


def hilbert_samuel_lengths(quotient, q, n_range: int = DEFAULT_N_RANGE,
                           at: CoordinatePrime | None = None) -> list:
    """[λ(R/q^n) for n = 1..n_range], R the localization of quotient at ``at``."""
    ring, I = quotient
    at, qideal = _resolve_point(ring, q, at)
    shift = at.shift
    Ip = _translated(I, shift)
    qp = _translated(qideal, shift)
    M = Ideal(ring, list(ring.gens()))
    for g in qp.generators:
        if g.terms.get((0,) * ring.nvars):
            raise NonPrimaryError(f"{g.to_text()} does not vanish at {at.to_text()}")
    J1 = Ip + qp
    if not _origin_isolated(J1):
        raise NonPrimaryError(f"q is not primary to the maximal ideal at {at.to_text()}")
    global_point = all(radical_contains(J1, v) for v in ring.gens())
    out = []
    for n in range(1, n_range + 1):
        J = Ip + qp ** n
        if global_point:
            out.append(standard_monomial_count(J))
        else:
            out.append(_local_length(J, M, n))
    return out


def _resolve_point(ring: RingSpec, q, at):
    if isinstance(q, CoordinatePrime):
        q.check(ring)
        qideal = q.generators(ring)
        if at is None:
            if not q.is_closed_point(ring):
                raise ValueError("give the closed point ``at`` when q is not maximal")
            at = q
    else:
        qideal = q
        if at is None:
            raise ValueError("give the closed point ``at`` for an ideal q")
    if not at.is_closed_point(ring):
        raise ValueError(f"{at.to_text()} is not a closed point of {ring}")
    return at, qideal


def _fit_multiplicity(lengths: list, d: int) -> int:
    diffs = list(lengths)
    for _ in range(d):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    tail = diffs[-3:]
    if len(tail) < 3 or len(set(tail)) != 1:
        raise NotYetPolynomialError(
            f"lengths {lengths} are not yet polynomial of degree {d}; increase n_range")
    return tail[0]


def hilbert_samuel_multiplicity(quotient, q, n_range: int = DEFAULT_N_RANGE,
                                dim: int | None = None,
                                at: CoordinatePrime | None = None) -> int:
    """e_q(R) = d! * (leading coefficient of λ(R/q^n)), via standard-monomial counts.

    ``quotient`` is ``(RingSpec, Ideal)``.  The dimension defaults to the
    Krull dimension of the quotient (equidimensional input is assumed).
    """
    ring, I = quotient
    if dim is None:
        dim = krull_dimension(I) if not I.is_zero() else ring.nvars
    if n_range < dim + 3:
        raise ValueError(f"n_range must be at least dim + 3 = {dim + 3}")
    lengths = hilbert_samuel_lengths(quotient, q, n_range, at)
    return _fit_multiplicity(lengths, dim)


# -- Zariski's formula -------------------------------------------------------------

@dataclass
class FiberTerm:
    prime: CoordinatePrime
    residue_degree: int
    mult_extended: int      # e of pB' localized at the fiber prime
    mult_local: int         # e of the fiber prime itself

    def as_dict(self) -> dict:
        return {"prime": self.prime.to_text(), "residue_degree": self.residue_degree,
                "mult_extended": self.mult_extended, "mult_local": self.mult_local}


@dataclass
class ZariskiReport:
    base_mult: int
    rank: int
    fiber: list = field(default_factory=list)

    @property
    def lhs(self) -> int:
        return self.base_mult * self.rank

    @property
    def rhs(self) -> int:
        return sum(t.mult_extended * t.residue_degree for t in self.fiber)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def chain_holds(self) -> bool:
        return all(t.mult_local <= t.mult_extended <= self.lhs for t in self.fiber)

    @property
    def exit_code(self) -> int:
        return 0 if self.equal and self.chain_holds else 3

    def as_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "equal": self.equal,
                "base_mult": self.base_mult, "rank": self.rank,
                "chain_holds": self.chain_holds,
                "fiber": [t.as_dict() for t in self.fiber]}


def _default_fiber(ext: Tower, p: CoordinatePrime) -> list:
    ring = ext.ring
    cand = CoordinatePrime(tuple(p.vars) + ext.zvars, p.shift)
    J = ext.ideal() + p.generators(ring)
    if not all(radical_contains(J, ring.var(z)) for z in ext.zvars):
        raise FiberDataError(f"fiber data missing: the fiber over {p.to_text()} is not "
                             f"the single point {cand.to_text()}")
    return [(cand, 1)]


def zariski_check(base, ext: Tower, p: CoordinatePrime, fiber=None,
                  n_range: int = DEFAULT_N_RANGE) -> ZariskiReport:
    """Compare e(base at p)·rank with Σ e(pB' at P)·[k(P):k] over the fiber.

    ``fiber`` is a list of ``(CoordinatePrime, residue_degree)`` in the tower
    ring; by default the single prime p + ⟨Z⟩ is used after checking that it
    is the only point over p.
    """
    bring, bideal = base
    if tuple(ext.base_vars) != bring.variables:
        raise ValueError("extension tower is not over the given base ring")
    if not p.is_closed_point(bring):
        raise ValueError("zariski_check needs a closed point of the base")
    base_mult = hilbert_samuel_multiplicity((bring, bideal), p, n_range)
    if fiber is None:
        fiber = _default_fiber(ext, p)
    if not fiber:
        raise FiberDataError("fiber data missing")
    ring = ext.ring
    I = ext.ideal() + Ideal(ring, [g.change_ring(ring) for g in bideal.generators])
    qext = p.generators(bring)
    qext = Ideal(ring, [g.change_ring(ring) for g in qext.generators])
    terms = []
    for P, deg in fiber:
        P.check(ring)
        e_ext = hilbert_samuel_multiplicity((ring, I), qext, n_range, at=P)
        e_loc = hilbert_samuel_multiplicity((ring, I), P, n_range)
        terms.append(FiberTerm(P, int(deg), e_ext, e_loc))
    return ZariskiReport(base_mult, ext.rank, terms)
