"""Rees algebras given by weighted generators ``f W^N``.

Graded pieces follow the convention ``I_{n+1} ⊆ I_n``: the degree-n piece
is generated by the products ``prod f_i^{a_i}`` with ``sum a_i N_i >= n``
(only the minimal such multisets are enumerated).  A generator ``f W^N``
therefore also accounts for ``f W^k`` with ``k < N``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from maxmult.errors import BudgetExceeded, NonInvertibleCoefficientError, NotInSingularLocusError
from maxmult.groebner import (
    current_budget,
    eliminate_to_subring,
    gb_budget,
    groebner_basis,
    ideal_equal,
    is_unit_ideal,
    normal_form,
)
from maxmult.points import CoordinatePrime, order_at_coordinate_prime
from maxmult.ring import Ideal, Polynomial, RingSpec, hasse_derivative, multi_indices


class ReesAlgebra:
    """B[f_1 W^{N_1}, ..., f_s W^{N_s}] with B = ring (or ring/modulo).

    Generators are kept up to units: each polynomial is scaled to leading
    coefficient 1 and duplicates are dropped.
    """

    __slots__ = ("ring", "gens", "modulo")

    def __init__(self, ring: RingSpec, gens: Iterable = (), modulo: Ideal | None = None):
        seen = {}
        for f, w in gens:
            if not isinstance(w, int) or w < 1:
                raise ValueError(f"weights must be positive integers, got {w!r}")
            if f.ring != ring:
                raise ValueError(f"generator ring {f.ring} differs from {ring}")
            if f.is_zero():
                raise ValueError("zero generator in a Rees algebra")
            g = f.monic()
            seen[(g, w)] = None
        self.ring = ring
        self.gens = tuple(sorted(seen, key=lambda t: (t[1], t[0].to_text())))
        if modulo is not None and modulo.is_zero():
            modulo = None
        self.modulo = modulo

    @classmethod
    def parse(cls, ring: RingSpec, pairs: Iterable, modulo: Iterable[str] | None = None):
        gens = [(ring.parse(p), int(w)) for p, w in pairs]
        mod = Ideal.parse(ring, modulo) if modulo else None
        return cls(ring, gens, mod)

    def __eq__(self, other):
        return (isinstance(other, ReesAlgebra) and self.ring == other.ring
                and self.gens == other.gens and self.modulo == other.modulo)

    def __hash__(self):
        return hash((self.ring, self.gens, self.modulo))

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __repr__(self):
        return f"ReesAlgebra({self.to_text()}, {self.ring})"

    @property
    def weights(self) -> list:
        return [w for _, w in self.gens]

    def max_weight(self) -> int:
        return max(self.weights, default=1)

    def default_degree_bound(self) -> int:
        return math.lcm(*self.weights) if self.gens else 1

    def with_gens(self, gens) -> "ReesAlgebra":
        return ReesAlgebra(self.ring, gens, self.modulo)

    def to_text(self, labels=None) -> str:
        items = []
        for f, w in self.gens:
            t = f.to_text(labels)
            if len(f.terms) > 1:
                t = f"({t})"
            items.append(f"{t} W" if w == 1 else f"{t} W^{w}")
        return "[" + ", ".join(items) + "]"

    def as_dict(self) -> dict:
        d = {"char": self.ring.characteristic, "vars": list(self.ring.variables),
             "gens": [{"poly": f.to_text(), "weight": w} for f, w in self.gens]}
        if self.modulo is not None:
            d["modulo"] = self.modulo.texts()
        return d


# -- graded pieces ------------------------------------------------------------

def _minimal_multisets(weights: Sequence[int], n: int):
    m = len(weights)

    def rec(i, counts, total):
        if total >= n:
            yield counts + [0] * (m - i)
            return
        if i == m:
            return
        w = weights[i]
        for a in range(0, -(-(n - total) // w) + 1):
            yield from rec(i + 1, counts + [a], total + a * w)

    for counts in rec(0, [], 0):
        total = sum(a * w for a, w in zip(counts, weights))
        used = [w for a, w in zip(counts, weights) if a]
        if used and total - min(used) < n:
            yield counts


def graded_piece(G: ReesAlgebra, n: int) -> Ideal:
    """The ideal I_n of the degree-n piece (representatives in the ambient ring)."""
    return _graded_piece(G.ring, G.gens, n)


@lru_cache(maxsize=2048)
def _graded_piece(ring: RingSpec, gens: tuple, n: int) -> Ideal:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return Ideal(ring, [ring.one()])
    polys = [f for f, _ in gens]
    weights = [w for _, w in gens]
    powers: dict = {}

    def power(i, a):
        if (i, a) not in powers:
            powers[(i, a)] = polys[i] ** a
        return powers[(i, a)]

    out = []
    for counts in _minimal_multisets(weights, n):
        prod = ring.one()
        for i, a in enumerate(counts):
            if a:
                prod = prod * power(i, a)
        out.append(prod)
    return Ideal(ring, out)


def _piece_with_modulo(G: ReesAlgebra, n: int) -> Ideal:
    piece = graded_piece(G, n)
    return piece + G.modulo if G.modulo is not None else piece


def algebra_equal_up_to(G: ReesAlgebra, H: ReesAlgebra, D: int | None = None) -> bool:
    """Graded pieces agree for every degree 1..D (default: lcm of all weights)."""
    if G.ring != H.ring:
        raise ValueError("algebras live over different rings")
    if D is None:
        D = math.lcm(G.default_degree_bound(), H.default_degree_bound())
    for n in range(1, D + 1):
        if not ideal_equal(_piece_with_modulo(G, n), _piece_with_modulo(H, n)):
            return False
    return True


def algebra_contains_up_to(big: ReesAlgebra, small: ReesAlgebra, D: int | None = None) -> bool:
    """small ⊆ big gradedwise up to D."""
    if D is None:
        D = math.lcm(big.default_degree_bound(), small.default_degree_bound())
    for n in range(1, D + 1):
        gb = groebner_basis(_piece_with_modulo(big, n))
        if not all(gb.contains(g) for g in graded_piece(small, n).generators):
            return False
    return True


# Pruning only simplifies: a generator kept by mistake leaves the algebra
# unchanged, while one dropped must really be redundant.  Over Q, where
# coefficient growth makes Gröbner bases of large pieces expensive, a test
# modulo a large prime screens candidates first and the exact test runs under
# a small step budget.
_SIEVE_PRIME = 2147483647
PRUNE_BUDGET_QQ = 60
PRUNE_MAX_TERMS_QQ = 120
PRUNE_MAX_BITS_QQ = 64


def _small_over_q(piece: Ideal) -> bool:
    terms = 0
    for g in piece.generators:
        terms += len(g.terms)
        for c in g.terms.values():
            c = Fraction(c)
            if c.numerator.bit_length() + c.denominator.bit_length() > PRUNE_MAX_BITS_QQ:
                return False
    return terms <= PRUNE_MAX_TERMS_QQ


def _sieve_member(f: Polynomial, piece: Ideal) -> bool:
    ring = f.ring
    target = RingSpec(_SIEVE_PRIME, ring.variables)
    try:
        image = Ideal(target, [g.change_ring(target) for g in piece.generators])
        return groebner_basis(image).contains(f.change_ring(target))
    except NonInvertibleCoefficientError:
        return True


def _redundant(f: Polynomial, piece: Ideal) -> bool:
    if f.ring.characteristic:
        return groebner_basis(piece).contains(f)
    if not _small_over_q(piece) or not _sieve_member(f, piece):
        return False
    try:
        with gb_budget(min(current_budget(), PRUNE_BUDGET_QQ)):
            return groebner_basis(piece).contains(f)
    except BudgetExceeded:
        return False


def prune(G: ReesAlgebra) -> ReesAlgebra:
    """Drop generators lying in the algebra generated by the others."""
    gens = list(G.gens)
    order = sorted(gens, key=lambda t: (t[1], t[0].degree(), t[0].to_text()), reverse=True)
    mod = G.modulo
    for cand in order:
        others = tuple(g for g in gens if g != cand)
        if not others:
            continue
        f, w = cand
        piece = _graded_piece(G.ring, others, w)
        if mod is not None:
            piece = piece + mod
        if _redundant(f, piece):
            gens = list(others)
    return G.with_gens(gens)


# -- singular locus and differential saturation --------------------------------

def sing_locus(G: ReesAlgebra) -> Ideal:
    """Ideal cutting out Sing(G): all D_alpha f_i with |alpha| <= N_i - 1."""
    ring = G.ring
    out = []
    for f, w in G.gens:
        for alpha in multi_indices(ring.nvars, w - 1):
            d = hasse_derivative(f, alpha)
            if d:
                out.append(d)
    return Ideal(ring, out)


def sing_is_empty(G: ReesAlgebra) -> bool:
    ideal = sing_locus(G)
    if G.modulo is not None:
        ideal = ideal + G.modulo
    return is_unit_ideal(ideal)


def in_sing(G: ReesAlgebra, prime: CoordinatePrime) -> bool:
    """Every generator has order >= its weight along the prime."""
    for f, w in G.gens:
        g = f.translate(prime.shift)
        if g.is_zero():
            continue
        if order_at_coordinate_prime(f, prime) < w:
            return False
    return True


def _saturate_over(G: ReesAlgebra, support: Sequence[int] | None, do_prune: bool) -> ReesAlgebra:
    ring = G.ring
    gens = list(G.gens)
    for f, w in G.gens:
        for alpha in multi_indices(ring.nvars, w - 1, support):
            if not any(alpha):
                continue
            d = hasse_derivative(f, alpha)
            if d:
                gens.append((d, w - sum(alpha)))
    out = G.with_gens(gens)
    return prune(out) if do_prune else out


def diff_saturate(G: ReesAlgebra, do_prune: bool = True) -> ReesAlgebra:
    """Add D_alpha(f) W^(N - |alpha|) for 0 < |alpha| < N, then prune."""
    return _saturate_over(G, None, do_prune)


def relative_diff_saturate(G: ReesAlgebra, zvars: Iterable[str], do_prune: bool = True) -> ReesAlgebra:
    """As :func:`diff_saturate` with alpha supported on ``zvars`` only."""
    support = [G.ring.index(v) for v in zvars]
    if not support:
        return G
    return _saturate_over(G, support, do_prune)


# -- elimination, tau, restriction ----------------------------------------------

def eliminate_algebra(G: ReesAlgebra, zvars: Iterable[str], D: int | None = None) -> ReesAlgebra:
    """Truncated elimination algebra G ∩ k[remaining vars][W] up to degree D."""
    zvars = [v for v in G.ring.variables if v in set(zvars)]
    if D is None:
        D = G.default_degree_bound()
    sub = G.ring.drop(zvars)
    gens = []
    for n in range(1, D + 1):
        for g in eliminate_to_subring(graded_piece(G, n), zvars).generators:
            gens.append((g, n))
    return prune(ReesAlgebra(sub, gens))


def _rank(rows: list, ring: RingSpec) -> int:
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = ring.nvars
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = ring.inv(rows[rank][col])
        rows[rank] = [ring.coerce(x * inv) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [ring.coerce(a - c * b) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def tau_at_point(G: ReesAlgebra, prime: CoordinatePrime) -> int:
    """Number of independent linear forms among weight-1 initial forms."""
    ring = G.ring
    prime.check(ring)
    if not prime.is_closed_point(ring):
        raise ValueError("tau is only computed at closed rational points")
    if not in_sing(G, prime):
        raise NotInSingularLocusError(f"{prime.to_text()} is not in Sing(G)")
    S = diff_saturate(G)
    rows = []
    for f, w in S.gens:
        if w != 1:
            continue
        lin = f.translate(prime.shift).homogeneous_part(1)
        row = [0] * ring.nvars
        for e, c in lin.terms.items():
            row[e.index(1)] = c
        rows.append(row)
    return _rank(rows, ring)


def restrict_to_subscheme(G: ReesAlgebra, IX: Ideal) -> ReesAlgebra:
    """Classes of the generators in (ring/IX)[W]; zero classes dropped.

    Surviving generators keep their original representatives.
    """
    if IX.ring != G.ring:
        raise ValueError("ideal and algebra live over different rings")
    if IX.is_zero():
        return G
    gb = groebner_basis(IX)
    gens = [(f, w) for f, w in G.gens if normal_form(f, gb)]
    modulo = IX if G.modulo is None else IX + G.modulo
    return prune(ReesAlgebra(G.ring, gens, modulo))


def extend_by_affine_line(G: ReesAlgebra, name: str) -> ReesAlgebra:
    """Pull back along V x A^1 -> V (a fresh variable, generators unchanged)."""
    ring = G.ring.extend([name])
    mod = None
    if G.modulo is not None:
        mod = Ideal(ring, [g.change_ring(ring) for g in G.modulo.generators])
    return ReesAlgebra(ring, [(f.change_ring(ring), w) for f, w in G.gens], mod)
