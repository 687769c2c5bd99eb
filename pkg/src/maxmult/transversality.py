"""Integral dependence, condition (*), transversality and blow-up probes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from maxmult.blowup import BlowupChart, tower_transform, weak_transform
from maxmult.errors import NotPermissibleError, StratumEmptyError
from maxmult.groebner import (
    MonomialOrder,
    eliminate_to_subring,
    groebner_basis,
    ideal_membership,
    is_unit_ideal,
    normal_form,
    radical_contains,
    saturate,
)
from maxmult.linalg import solve
from maxmult.multiplicity import max_mult_stratum, presentation_algebra, stratum_contains
from maxmult.newton import newton_membership
from maxmult.points import CoordinatePrime, order_at_coordinate_prime
from maxmult.rees import (
    ReesAlgebra,
    algebra_contains_up_to,
    diff_saturate,
    eliminate_algebra,
    graded_piece,
    in_sing,
    sing_locus,
)
from maxmult.ring import Ideal, Polynomial, RingSpec, multi_indices
from maxmult.tower import Tower

DEFAULT_N_MAX = 6
# total degree beyond which coefficient multipliers are not enumerated
MULT_DEGREE_CAP = 12


@dataclass
class IntegralityVerdict:
    """Three-valued outcome of an integral-dependence test.

    ``witness`` holds the reduction exponent or explicit monic equations
    (integral) or the separating monomial valuation (refuted).
    """

    status: str
    witness: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    budget: dict = field(default_factory=dict)
    parts: list = field(default_factory=list)

    @property
    def integral(self) -> bool:
        return self.status == "integral"

    @property
    def exit_code(self) -> int:
        return {"integral": 0, "refuted": 3}.get(self.status, 4)

    def as_dict(self) -> dict:
        d = {"status": self.status, "witness": _plain(self.witness),
             "diagnostics": list(self.diagnostics), "budget": dict(self.budget)}
        if self.parts:
            d["parts"] = [p.as_dict() for p in self.parts]
        return d


def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


# -- monomial closure and reductions ------------------------------------------------

def _single_exponent(f: Polynomial):
    if not f.is_monomial():
        raise ValueError(f"{f.to_text()} is not a monomial")
    return next(iter(f.terms))


def monomial_closure_membership(theta: Polynomial, J: Ideal) -> bool:
    """theta in the integral closure of the monomial ideal J (Newton polyhedron)."""
    point = _single_exponent(theta)
    gens = [(_single_exponent(g), 1) for g in J.generators]
    inside, _ = newton_membership(point, gens, 1)
    return inside


def reduction_test(J: Ideal, theta: Polynomial, n_max: int = DEFAULT_N_MAX,
                   modulo: Ideal | None = None) -> IntegralityVerdict:
    """Decide theta ∈ closure(J) by J (J+θ)^n = (J+θ)^{n+1}, n <= n_max.

    Only θ^{n+1} ∈ J (J+θ)^n needs testing: every other generator of
    (J+θ)^{n+1} already has a factor from J.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ring = J.ring
    extra = list(modulo.generators) if modulo is not None else []
    budget = {"n_max": n_max}
    if ideal_membership(theta, Ideal(ring, list(J.generators) + extra)):
        return IntegralityVerdict("integral", {"n": 0, "reason": "theta in J"}, budget=budget)
    powers = [Ideal(ring, [ring.one()]), J]
    for n in range(1, n_max + 1):
        while len(powers) <= n + 1:
            powers.append(powers[-1] * J)
        gens = list(extra)
        for i in range(n + 1):
            th = theta ** i
            gens.extend(g * th for g in powers[n + 1 - i].generators)
        if ideal_membership(theta ** (n + 1), Ideal(ring, gens)):
            return IntegralityVerdict("integral", {"n": n}, budget=budget)
    monomial = (modulo is None or modulo.is_zero()) and theta.is_monomial() and all(
        g.is_monomial() for g in J.generators)
    if monomial:
        point = _single_exponent(theta)
        inside, cert = newton_membership(point, [(_single_exponent(g), 1) for g in J.generators])
        if not inside:
            return IntegralityVerdict("refuted", {"valuation": list(cert)}, budget=budget)
        return IntegralityVerdict("inconclusive", diagnostics=[
            f"inside the Newton polyhedron but no reduction with n <= {n_max}; increase n_max"],
            budget=budget)
    return IntegralityVerdict("inconclusive", diagnostics=[
        f"no reduction with n <= {n_max}; no refutation outside the monomial case"], budget=budget)


# -- integrality of Rees algebras ----------------------------------------------------

def _combined_modulo(H: ReesAlgebra, Hp: ReesAlgebra):
    gens = []
    for G in (H, Hp):
        if G.modulo is not None:
            gens.extend(G.modulo.generators)
    return Ideal(H.ring, gens) if gens else None


def _vector(f: Polynomial) -> dict:
    return dict(f.terms)


def _monomial_refutation(theta: Polynomial, n: int, H: ReesAlgebra, modulo, base_vars):
    """Separating valuation for θW^n over a monomial H ⊂ S[W], or None."""
    ring = H.ring
    if not H.gens or not all(f.is_monomial() for f, _ in H.gens):
        return None
    if base_vars is None:
        if modulo is not None:
            return None
        base_vars = ring.variables
    S = [v for v in ring.variables if v in set(base_vars)]
    others = [v for v in ring.variables if v not in set(S)]
    for f, _ in H.gens:
        if f.support() - set(S):
            return None
    if modulo is not None and others:
        if not eliminate_to_subring(modulo, others).is_zero():
            return None
        red = normal_form(theta, groebner_basis(modulo, MonomialOrder.block(others)))
    elif modulo is not None:
        return None
    else:
        red = theta
    if red.is_zero() or red.support() - set(S):
        return None
    idx = [ring.index(v) for v in S]
    gens = [(tuple(next(iter(f.terms))[i] for i in idx), w) for f, w in H.gens]
    for e in red.terms:
        point = tuple(e[i] for i in idx)
        inside, cert = newton_membership(point, gens, n)
        if not inside:
            return {"valuation": dict(zip(S, cert)), "term": red.to_text(), "level": n}
    return None


def _equation_search(theta: Polynomial, n: int, H: ReesAlgebra, modulo, D: int, N: int,
                     mult_cap: int | None = None):
    """Coefficients a_j ∈ I_{jn}(H) with θ^N + Σ a_j θ^{N-j} ≡ 0.

    Returns ``(exists, coeffs)``.  Existence is decided by ideal membership;
    the a_j are then written out with monomial multipliers of degree D,
    D + 1, ... up to ``mult_cap`` (``coeffs`` is None if none suffices).
    """
    ring = H.ring
    gb = groebner_basis(modulo) if modulo is not None else None
    nf = (lambda f: normal_form(f, gb)) if gb is not None else (lambda f: f)
    pieces = [graded_piece(H, j * n) for j in range(1, N + 1)]
    gens = list(modulo.generators) if modulo is not None else []
    for j, piece in enumerate(pieces, start=1):
        th = theta ** (N - j)
        gens.extend(g * th for g in piece.generators)
    if not ideal_membership(theta ** N, Ideal(ring, gens)):
        return False, None
    target = {e: -c for e, c in nf(theta ** N).terms.items()}
    for deg in range(D, max(D, mult_cap if mult_cap is not None else D) + 1):
        mults = [ring.monomial(e) for e in multi_indices(ring.nvars, deg)]
        columns, labels = [], []
        for j, piece in enumerate(pieces, start=1):
            th = theta ** (N - j)
            for g in piece.generators:
                for m in mults:
                    columns.append(_vector(nf(th * m * g)))
                    labels.append((j, m * g))
        sol = solve(columns, target, ring)
        if sol is None:
            continue
        coeffs = [ring.zero() for _ in range(N)]
        for c, (j, mg) in zip(sol, labels):
            if c:
                coeffs[j - 1] = coeffs[j - 1] + mg.scale(c)
        return True, coeffs
    return True, None


def verify_equation(theta: Polynomial, coeffs: Sequence[Polynomial], modulo: Ideal | None) -> bool:
    """θ^N + a_1 θ^{N-1} + ... + a_N expands to zero in ring/modulo."""
    N = len(coeffs)
    total = theta ** N
    for j, a in enumerate(coeffs, start=1):
        total = total + a * theta ** (N - j)
    if modulo is None:
        return total.is_zero()
    return ideal_membership(total, modulo)


def rees_integrality_test(H: ReesAlgebra, Hp: ReesAlgebra, D: int | None = None,
                          n_max: int = DEFAULT_N_MAX, base_vars: Iterable[str] | None = None
                          ) -> IntegralityVerdict:
    """Is every generator θW^n of Hp integral over H (in ring/modulo)[W]?

    ``D`` is the degree up to which H ⊆ Hp is checked and the first total
    degree tried for the monomial multipliers that write out the a_j; once
    an equation is known to exist the multiplier degree grows up to
    deg θ^N plus the largest degree of the modulus (at most MULT_DEGREE_CAP).
    ``base_vars`` names a polynomial subring S with H ⊂ S[W] over which the
    quotient is integral; it enables the monomial refutation.
    """
    if H.ring != Hp.ring:
        raise ValueError("algebras live over different rings")
    if D is None:
        D = math.lcm(H.default_degree_bound(), Hp.default_degree_bound())
    modulo = _combined_modulo(H, Hp)
    if not algebra_contains_up_to(Hp, H.with_gens(H.gens), D):
        raise ValueError("H is not contained in Hp up to the degree bound")
    budget = {"D": D, "n_max": n_max}
    base = list(base_vars) if base_vars is not None else None
    parts = []
    for theta, n in Hp.gens:
        label = f"{theta.to_text()} W^{n}" if n > 1 else f"{theta.to_text()} W"
        cert = _monomial_refutation(theta, n, H, modulo, base)
        if cert is not None:
            parts.append(IntegralityVerdict("refuted", {"generator": label, **cert}, budget=budget))
            continue
        found = None
        exists_at = None
        extra_deg = max((g.degree() for g in modulo.generators), default=0) if modulo is not None else 0
        for N in range(1, n_max + 1):
            cap = min(N * theta.degree() + extra_deg, MULT_DEGREE_CAP)
            exists, coeffs = _equation_search(theta, n, H, modulo, D, N, cap)
            if exists and exists_at is None:
                exists_at = N
            if coeffs is not None:
                found = (N, coeffs)
                break
        if found is not None:
            N, coeffs = found
            ok = verify_equation(theta, coeffs, modulo)
            parts.append(IntegralityVerdict("integral", {
                "generator": label, "N": N,
                "coefficients": [a.to_text() for a in coeffs], "verified": ok}, budget=budget))
        elif exists_at is not None:
            parts.append(IntegralityVerdict("inconclusive", {"generator": label}, [
                f"{label}: an equation of degree {exists_at} exists but writing out its "
                f"coefficients needs multipliers of degree above {MULT_DEGREE_CAP}"], budget))
        else:
            parts.append(IntegralityVerdict("inconclusive", {"generator": label}, [
                f"{label}: no monic equation of degree <= {n_max}; increase n_max"], budget))
    if any(p.status == "refuted" for p in parts):
        status = "refuted"
    elif all(p.status == "integral" for p in parts):
        status = "integral"
    else:
        status = "inconclusive"
    diags = [d for p in parts for d in p.diagnostics]
    witness = {"equations": [p.witness for p in parts if p.status == "integral"]}
    refs = [p.witness for p in parts if p.status == "refuted"]
    if refs:
        witness["refutations"] = refs
    return IntegralityVerdict(status, witness, diags, budget, parts)


# -- tower pairs ---------------------------------------------------------------------

def _extra_zvars(base: Tower, ext: Tower) -> tuple:
    if tuple(base.base_vars) != tuple(ext.base_vars):
        raise ValueError("towers have different base variables")
    k = len(base.steps)
    if ext.zvars[:k] != base.zvars:
        raise ValueError("extension tower does not start with the base tower")
    for (z, f), (_, g) in zip(base.steps, ext.steps):
        if f.change_ring(ext.ring) != g:
            raise ValueError(f"relation for {z} differs between the towers")
    return ext.zvars[k:]


@dataclass
class TransversalityReport:
    r: int
    s: int
    base: object
    ext: object

    @property
    def rs(self) -> int:
        return self.r * self.s

    @property
    def transversal(self) -> bool:
        return self.ext.nonempty

    def summary(self) -> str:
        word = "transversal" if self.transversal else "not transversal"
        return f"{word}: r = {self.r}, s = {self.s}, rs = {self.rs}"

    def as_dict(self) -> dict:
        return {"transversal": self.transversal, "r": self.r, "s": self.s, "rs": self.rs,
                "base": self.base.as_dict(), "ext": self.ext.as_dict()}


def is_transversal(base_tower: Tower, ext_tower: Tower) -> TransversalityReport:
    _extra_zvars(base_tower, ext_tower)
    b = max_mult_stratum(base_tower)
    e = max_mult_stratum(ext_tower)
    r = ext_tower.rank // base_tower.rank
    return TransversalityReport(r, base_tower.rank, b, e)


@dataclass
class ConditionStarReport:
    prime: CoordinatePrime
    candidate: CoordinatePrime
    flags: dict
    details: dict

    @property
    def holds(self) -> bool:
        return all(v == "holds" for v in self.flags.values())

    @property
    def status(self) -> str:
        if self.holds:
            return "holds"
        if any(v == "fails" for v in self.flags.values()):
            return "fails"
        return "inconclusive"

    def as_dict(self) -> dict:
        return {"prime": self.prime.to_text(), "candidate": self.candidate.to_text(),
                "flags": dict(self.flags), "status": self.status,
                "details": _plain(self.details)}


def _in_prime(g: Polynomial, p: CoordinatePrime) -> bool:
    return g.is_zero() or order_at_coordinate_prime(g, p) >= 1


def _root_valuation(f: Polynomial, z: str, ps: CoordinatePrime, S: set):
    """Common valuation of all roots of f (monic in z) under ord along ps, or None."""
    if f.support() - S - {z}:
        return None
    coeffs = f.coefficients_in(z)
    d = f.degree_in(z)
    ad = coeffs.get(0)
    if ad is None or ad.is_zero():
        return None
    mu = Fraction(order_at_coordinate_prime(ad, ps), d)
    for k, a in coeffs.items():
        if k == d or a.is_zero():
            continue
        i = d - k
        if order_at_coordinate_prime(a, ps) < i * mu:
            return None
    return mu


def _valuation_refutation(base: Tower, ext: Tower, p: CoordinatePrime, z: str):
    ring = ext.ring
    S = set(base.base_vars)
    ps = p.restrict(RingSpec(ring.characteristic, tuple(base.base_vars)))
    if ps is None:
        return None
    shift = p.shift
    rel = dict(ext.steps)
    w_z = _root_valuation(rel[z].translate(shift), z, ps, S)
    if w_z is None:
        return None
    values = {}
    for v in p.vars:
        if v in S:
            values[v] = Fraction(1)
        else:
            if shift.get(v):
                return None
            w = _root_valuation(rel[v].translate(shift), v, ps, S)
            if w is None:
                return None
            values[v] = w
    floor = min(values.values())
    if w_z < floor:
        return {"w": {**values, z: w_z}, "along": ps.to_text()}
    return None


def _explicit_integrality(f: Polynomial, z: str, p: CoordinatePrime) -> bool:
    """f = z^d + Σ a_i z^{d-i} with a_i ∈ p^i (p-degree of every term >= i)."""
    g = f.translate(p.shift)
    d = g.degree_in(z)
    idx = [g.ring.index(v) for v in p.vars]
    for k, a in g.coefficients_in(z).items():
        if k == d or a.is_zero():
            continue
        i = d - k
        if min(sum(e[j] for j in idx) for e in a.terms) < i:
            return False
    return True


def condition_star(base_tower: Tower, ext_tower: Tower, p: CoordinatePrime,
                   n_max: int = DEFAULT_N_MAX) -> ConditionStarReport:
    """The three parts of (*) at the candidate P = pB' + ⟨extra Z⟩."""
    extra = _extra_zvars(base_tower, ext_tower)
    ring = ext_tower.ring
    p.check(base_tower.ring)
    for g in base_tower.ideal().generators:
        if not _in_prime(g, p):
            raise ValueError(f"{p.to_text()} is not a point of the base ({g.to_text()} ∉ p)")
    P = p.with_vars(extra)
    I = ext_tower.ideal()
    pgens = p.generators(ring)
    Pgens = P.generators(ring)
    flags, details = {}, {}

    # (ii): P contains the relations, so B/p = B'/P by construction
    outside = [g.to_text() for g in I.generators if not ideal_membership(g, Pgens)]
    if outside:
        flags = {"i": "inconclusive", "ii": "fails", "iii": "inconclusive"}
        details["ii"] = f"candidate {P.to_text()} does not contain {outside}"
        return ConditionStarReport(p, P, flags, details)
    flags["ii"] = "holds"

    # (i): no other component of V(I + p) dominates V(p)
    other = []
    for z in extra:
        E = eliminate_to_subring(saturate(I + pgens, ring.var(z)), extra)
        if not is_unit_ideal(E) and all(_in_prime(g, p) for g in E.generators):
            other.append(z)
    flags["i"] = "fails" if other else "holds"
    if other:
        details["i"] = f"another prime over {p.to_text()} with {other[0]} ≠ 0"

    # (iii): each extra Z integral over pB'_P
    status = "holds"
    per = {}
    rel = dict(ext_tower.steps)
    for z in extra:
        if _explicit_integrality(rel[z], z, p):
            per[z] = "explicit equation with a_i ∈ p^i"
            continue
        ref = _valuation_refutation(base_tower, ext_tower, p, z)
        if ref is not None:
            per[z] = {"refuted": ref}
            status = "fails"
            continue
        v = reduction_test(pgens, ring.var(z), n_max, modulo=I)
        if v.integral:
            per[z] = {"reduction": v.witness}
        else:
            per[z] = {"inconclusive": v.diagnostics}
            if status == "holds":
                status = "inconclusive"
    flags["iii"] = status
    details["iii"] = per
    return ConditionStarReport(p, P, {k: flags[k] for k in ("i", "ii", "iii")}, details)


# -- probes along blow-up sequences ---------------------------------------------------

class _Side:
    """Uniform access to a Tower or a bare Rees algebra."""

    def __init__(self, obj):
        self.obj = obj

    @property
    def ring(self) -> RingSpec:
        return self.obj.ring

    def algebra(self) -> ReesAlgebra:
        if isinstance(self.obj, Tower):
            return diff_saturate(presentation_algebra(self.obj)[1])
        return diff_saturate(self.obj)

    def stratum(self) -> Ideal:
        G = self.algebra()
        ideal = sing_locus(G)
        if G.modulo is not None:
            ideal = ideal + G.modulo
        return Ideal(ideal.ring, groebner_basis(ideal).basis)

    def contains(self, prime: CoordinatePrime) -> bool:
        if isinstance(self.obj, Tower):
            return stratum_contains(self.obj, prime)
        return in_sing(self.algebra(), prime)

    def transform(self, center: CoordinatePrime, chart: str) -> "_Side":
        if isinstance(self.obj, Tower):
            return _Side(tower_transform(self.obj, center, chart))
        return _Side(weak_transform(self.obj, BlowupChart(self.ring, center, chart)))

    def as_dict(self):
        return self.obj.as_dict()


def generation_labels(ring: RingSpec, k: int) -> dict:
    return {v: f"{v}{k}" for v in ring.variables} if k else {}


@dataclass
class ProbeRecord:
    prime: CoordinatePrime
    lift: CoordinatePrime
    base_in: bool
    ext_in: bool
    covered: bool
    status: str

    def as_dict(self, labels=None) -> dict:
        return {"prime": self.prime.to_text(labels), "lift": self.lift.to_text(labels),
                "base_in": self.base_in, "ext_in": self.ext_in, "covered": self.covered,
                "status": self.status}


@dataclass
class StageRecord:
    index: int
    center: CoordinatePrime | None
    base_center: CoordinatePrime | None
    chart: str | None
    base_stratum: Ideal
    ext_stratum: Ideal
    base_nonempty: bool
    ext_nonempty: bool
    surjective: bool
    image_ok: bool
    probes: list
    labels: dict
    base_object: dict = field(default_factory=dict)
    ext_object: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        L = self.labels
        return {"stage": self.index,
                "center": self.center.to_text(L) if self.center else None,
                "base_center": self.base_center.to_text(L) if self.base_center else None,
                "chart": L.get(self.chart, self.chart) if self.chart else None,
                "base_stratum": self.base_stratum.to_text([L.get(v, v) for v in self.base_stratum.ring.variables]),
                "ext_stratum": self.ext_stratum.to_text([L.get(v, v) for v in self.ext_stratum.ring.variables]),
                "base_nonempty": self.base_nonempty, "ext_nonempty": self.ext_nonempty,
                "surjective": self.surjective, "image_ok": self.image_ok,
                "probes": [p.as_dict(L) for p in self.probes]}


@dataclass
class SequenceProbe:
    stages: list
    verdict: str
    witness: str | None = None
    witness_stage: int | None = None
    reason: str | None = None

    @property
    def exit_code(self) -> int:
        return 3 if self.verdict == "violated" else 0

    def summary(self) -> str:
        if self.verdict == "violated" and self.witness:
            return f"strong transversality violated at {self.witness}"
        if self.verdict == "violated":
            return f"strong transversality violated: {self.reason}"
        return "strong transversality consistent along the probed sequence"

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "witness": self.witness,
                "witness_stage": self.witness_stage, "reason": self.reason,
                "stages": [s.as_dict() for s in self.stages]}


def _covered_primes(ext: _Side, base_ring: RingSpec) -> Ideal:
    """Ideal of the closure of the image of the ext stratum in the base."""
    stratum = ext.stratum()
    extra = [v for v in ext.ring.variables if v not in base_ring.variables]
    if not extra:
        return Ideal(base_ring, [g.change_ring(base_ring) for g in stratum.generators])
    E = eliminate_to_subring(stratum, extra)
    return E


def _stage(k, base: _Side, ext: _Side, probes, center, base_center, chart) -> StageRecord:
    bring = base.ring
    bs = base.stratum()
    es = ext.stratum()
    b_ne = not is_unit_ideal(bs)
    e_ne = not is_unit_ideal(es)
    image = _covered_primes(ext, bring)
    image = Ideal(bring, [g.change_ring(bring) for g in image.generators])
    surjective = all(radical_contains(bs, g) for g in image.generators) if b_ne else True
    extra = [v for v in ext.ring.variables if v not in bring.variables]
    records = []
    image_ok = True
    for q in probes:
        lift = q.with_vars(extra)
        b_in = base.contains(q)
        e_in = ext.contains(lift)
        covered = all(_in_prime(g, q) for g in image.generators) if not is_unit_ideal(image) else False
        if e_in and not b_in:
            status = "image outside base stratum"
            image_ok = False
        elif b_in and not covered:
            status = "violated"
        elif b_in:
            status = "consistent"
        else:
            status = "outside both" if not e_in else "ext only"
        records.append(ProbeRecord(q, lift, b_in, e_in, covered, status))
    return StageRecord(k, center, base_center, chart, bs, es, b_ne, e_ne, surjective,
                       image_ok, records, generation_labels(ext.ring, k),
                       base.as_dict(), ext.as_dict())


def strong_transversality_probe(base, ext, steps: Sequence = (), probes: Sequence = ()
                                ) -> SequenceProbe:
    """Blow up both objects along ``steps`` and compare their top strata.

    ``steps`` are ``(center, chart)`` pairs for the extension; the base
    center is the restriction of the center to the base variables.
    ``probes`` are coordinate primes of the base ring, evaluated at every
    stage; their lift adds the extra variables at zero.
    """
    b, e = _Side(base), _Side(ext)
    if isinstance(base, Tower) and isinstance(ext, Tower):
        _extra_zvars(base, ext)
    for v in b.ring.variables:
        e.ring.index(v)
    stages = [_stage(0, b, e, probes, None, None, None)]
    for k, (center, chart) in enumerate(steps, start=1):
        center.check(e.ring)
        bcenter = center.restrict(b.ring)
        if bcenter is None:
            raise NotPermissibleError(f"center {center.to_text()} has no base variables")
        if chart not in b.ring.variables:
            raise NotPermissibleError(f"chart variable {chart} must be a base variable")
        if not in_sing(e.algebra(), center):
            raise NotPermissibleError(f"center {center.to_text()} is not in the extension's stratum")
        e = e.transform(center, chart)
        b = b.transform(bcenter, chart)
        stages.append(_stage(k, b, e, probes, center, bcenter, chart))
    for st in stages:
        for pr in st.probes:
            if pr.status == "violated":
                return SequenceProbe(stages, "violated", pr.lift.to_text(st.labels), st.index,
                                     "probe prime of the base stratum has no extension point over it")
        if not st.surjective:
            reason = ("extension stratum is empty while the base stratum is not"
                      if not st.ext_nonempty else
                      "extension stratum does not cover the base stratum")
            return SequenceProbe(stages, "violated", None, st.index, f"{reason} (stage {st.index})")
    return SequenceProbe(stages, "consistent")


# -- construction ----------------------------------------------------------------------

@dataclass
class ConstructionReport:
    status: str
    H: ReesAlgebra
    verdict: IntegralityVerdict

    @property
    def certified(self) -> bool:
        return self.status == "strongly transversal (certified)"

    @property
    def exit_code(self) -> int:
        return 0 if self.certified else self.verdict.exit_code

    def as_dict(self) -> dict:
        return {"status": self.status, "H": self.H.to_text(), "verdict": self.verdict.as_dict()}


def construct_extension(base_tower: Tower, new_relations: Sequence, D: int | None = None,
                        n_max: int = DEFAULT_N_MAX):
    """Adjoin ``new_relations`` (``(Z, monic relation)``) and certify Z W integral over H.

    H is the elimination algebra of the saturated presentation of the base
    down to its base ring.
    """
    report = max_mult_stratum(base_tower)
    if not report.nonempty:
        raise StratumEmptyError("the base tower has an empty maximum-multiplicity stratum")
    ext = base_tower.extend(new_relations)
    H = eliminate_algebra(report.saturated, base_tower.zvars,
                          report.saturated.default_degree_bound())
    ring = ext.ring
    modulo = ext.ideal()
    Hl = ReesAlgebra(ring, [(f.change_ring(ring), w) for f, w in H.gens], modulo)
    new_z = ext.zvars[len(base_tower.steps):]
    Hp = Hl.with_gens(list(Hl.gens) + [(ring.var(z), 1) for z in new_z])
    verdict = rees_integrality_test(Hl, Hp, D, n_max, base_vars=base_tower.base_vars)
    status = "strongly transversal (certified)" if verdict.integral else "not certified"
    return ext, ConstructionReport(status, H, verdict)
