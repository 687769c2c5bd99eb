"""Buchberger's algorithm and the ideal operations built on it.

Monomial orders are realised as *linear* encodings of exponent vectors into
tuples whose lexicographic comparison is the order:

* grevlex:  ``(deg, -e_n, ..., -e_1)``
* lex:      ``(e_1, ..., e_n)``
* block:    grevlex on the eliminated variables, then grevlex on the rest

Linearity means monomial multiplication is componentwise addition of keys,
which keeps the sorted term lists used by the kernels sorted.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from maxmult import _kernel
from maxmult.errors import BudgetExceeded
from maxmult.ring import Ideal, Polynomial, RingSpec

DEFAULT_BUDGET = 200_000

_budget = contextvars.ContextVar("gb_budget", default=DEFAULT_BUDGET)


@contextlib.contextmanager
def gb_budget(limit: int | None):
    """Scope the reduction-step budget for Gröbner computations."""
    token = _budget.set(DEFAULT_BUDGET if limit is None else int(limit))
    try:
        yield
    finally:
        _budget.reset(token)


def current_budget() -> int:
    return _budget.get()


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"
    elim: tuple = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "elim", tuple(self.elim))
        if self.kind == "block" and not self.elim:
            raise ValueError("block order needs a nonempty variable set")

    @classmethod
    def block(cls, names: Iterable[str]) -> "MonomialOrder":
        return cls("block", tuple(names))

    def __str__(self):
        return f"block({','.join(self.elim)})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class _Encoding:
    """encode/decode between exponent tuples and order keys."""

    def __init__(self, order: MonomialOrder, ring: RingSpec):
        n = ring.nvars
        if order.kind == "lex":
            self.blocks = None
            self.perm = list(range(n))
        else:
            if order.kind == "grevlex":
                blocks = [list(range(n))]
            else:
                elim = [ring.index(v) for v in order.elim]
                rest = [i for i in range(n) if i not in elim]
                blocks = [b for b in (elim, rest) if b]
            self.blocks = blocks
        sgn = []
        if self.blocks is None:
            sgn = [1] * n
        else:
            for b in self.blocks:
                sgn.append(0)
                sgn.extend([-1] * len(b))
        self.sgn = tuple(sgn)
        self.n = n

    def encode(self, e):
        if self.blocks is None:
            return tuple(e)
        out = []
        for b in self.blocks:
            out.append(sum(e[i] for i in b))
            out.extend(-e[i] for i in reversed(b))
        return tuple(out)

    def decode(self, k):
        if self.blocks is None:
            return tuple(k)
        e = [0] * self.n
        pos = 0
        for b in self.blocks:
            pos += 1
            for i in reversed(b):
                e[i] = -k[pos]
                pos += 1
        return tuple(e)

    def to_sorted(self, f: Polynomial):
        return sorted(((self.encode(e), c) for e, c in f.terms.items()), reverse=True)

    def from_sorted(self, ring: RingSpec, terms) -> Polynomial:
        return Polynomial(ring, {self.decode(k): c for k, c in terms})


@lru_cache(maxsize=256)
def _encoding(order: MonomialOrder, ring: RingSpec) -> _Encoding:
    return _Encoding(order, ring)


@dataclass(frozen=True)
class GroebnerBasis:
    ideal: Ideal
    order: MonomialOrder
    basis: tuple

    @property
    def ring(self) -> RingSpec:
        return self.ideal.ring

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def is_zero(self) -> bool:
        return not self.basis

    def leading_monomials(self) -> list:
        enc = _encoding(self.order, self.ring)
        return [enc.decode(max(enc.encode(e) for e in g.terms)) for g in self.basis]

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def as_ideal(self) -> Ideal:
        return Ideal(self.ring, self.basis)


def _monic_sorted(terms, ring):
    lc = terms[0][1]
    if lc == 1:
        return terms
    inv = ring.inv(lc)
    p = ring.characteristic
    if p:
        return [(k, c * inv % p) for k, c in terms]
    return [(k, ring.coerce(c * inv)) for k, c in terms]


def _lcm(enc, a, b):
    ea, eb = enc.decode(a), enc.decode(b)
    return enc.encode(tuple(max(x, y) for x, y in zip(ea, eb)))


def _coprime(enc, a, b):
    ea, eb = enc.decode(a), enc.decode(b)
    return not any(x and y for x, y in zip(ea, eb))


def _interreduce(polys, ring, enc, p):
    """Minimalise and tail-reduce a list of monic sorted-layout polynomials."""
    sgn = enc.sgn
    polys = sorted(polys, key=lambda g: g[0][0])
    minimal = []
    for g in polys:
        if not any(_kernel.divides(h[0][0], g[0][0], sgn) for h in minimal):
            minimal = [h for h in minimal if not _kernel.divides(g[0][0], h[0][0], sgn)]
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail, _ = _kernel.normal_form(g[1:], others, p, sgn)
        out.append([g[0]] + tail)
    return out


def _buchberger(polys, ring: RingSpec, enc: _Encoding, limit: int):
    p = ring.characteristic
    sgn = enc.sgn
    used = 0
    store = []       # all basis polynomials ever added
    active = []      # whether store[i] is in the current basis
    pairs = []       # (selection key, i, j, lcm)

    def update(h):
        lh = h[0][0]
        cand = [(i, _lcm(enc, store[i][0][0], lh)) for i in range(len(store)) if active[i]]
        kept = []
        while cand:
            i, l = cand.pop(0)
            if _coprime(enc, store[i][0][0], lh) or not (
                    any(_kernel.divides(l2, l, sgn) for _, l2 in cand)
                    or any(_kernel.divides(l2, l, sgn) for _, l2 in kept)):
                kept.append((i, l))
        new = [(i, l) for i, l in kept if not _coprime(enc, store[i][0][0], lh)]
        survivors = []
        for item in pairs:
            _, a, b, l = item
            if (_kernel.divides(lh, l, sgn)
                    and _lcm(enc, store[a][0][0], lh) != l
                    and _lcm(enc, store[b][0][0], lh) != l):
                continue
            survivors.append(item)
        k = len(store)
        for i, l in new:
            survivors.append((_select_key(enc, l), i, k, l))
        pairs[:] = survivors
        for i in range(len(store)):
            if active[i] and _kernel.divides(lh, store[i][0][0], sgn):
                active[i] = False
        store.append(h)
        active.append(True)

    for f in polys:
        basis = [store[i] for i in range(len(store)) if active[i]]
        r, steps = _kernel.normal_form(f, basis, p, sgn, max(0, limit - used))
        used += steps
        if r is None:
            raise BudgetExceeded(limit, used)
        if r:
            r = _monic_sorted(r, ring)
            if not any(r[0][0]):
                return [r]
            update(r)

    while pairs:
        pairs.sort(key=lambda t: t[0])
        _, i, j, l = pairs.pop(0)
        f, g = store[i], store[j]
        # S-polynomial: (l/lm f) f - (l/lm g) g, both monic
        sf = tuple(x - y for x, y in zip(l, f[0][0]))
        sg = tuple(x - y for x, y in zip(l, g[0][0]))
        shifted_f = [(tuple(u + v for u, v in zip(k, sf)), c) for k, c in f]
        s = _kernel.sub_mul(shifted_f, 1, g, 1, sg, p)
        basis = [store[t] for t in range(len(store)) if active[t]]
        r, steps = _kernel.normal_form(s, basis, p, sgn, max(0, limit - used))
        used += steps + 1
        if r is None or used > limit:
            raise BudgetExceeded(limit, used)
        if r:
            r = _monic_sorted(r, ring)
            if not any(r[0][0]):
                return [r]
            update(r)
    return [store[i] for i in range(len(store)) if active[i]]


def _select_key(enc, l):
    return (sum(enc.decode(l)), l)


@lru_cache(maxsize=4096)
def _gb_cached(ring: RingSpec, gens: tuple, order: MonomialOrder, limit: int):
    enc = _encoding(order, ring)
    p = ring.characteristic
    polys = sorted((_monic_sorted(enc.to_sorted(g), ring) for g in gens),
                   key=lambda t: (sum(enc.decode(t[0][0])), t[0][0]))
    basis = _buchberger(polys, ring, enc, limit)
    basis = _interreduce(basis, ring, enc, p)
    basis.sort(key=lambda g: g[0][0])
    return tuple(enc.from_sorted(ring, g) for g in basis)


def clear_cache() -> None:
    """Forget memoized Gröbner bases (used by benchmarks and timing tests)."""
    _gb_cached.cache_clear()


def groebner_basis(ideal: Ideal, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Reduced Gröbner basis, monic, sorted by increasing leading monomial."""
    gens = tuple(sorted(ideal.generators, key=lambda g: g.to_text()))
    basis = _gb_cached(ideal.ring, gens, order, current_budget())
    return GroebnerBasis(ideal, order, basis)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    if f.ring != gb.ring:
        raise ValueError(f"ring mismatch: {f.ring} vs {gb.ring}")
    enc = _encoding(gb.order, gb.ring)
    basis = [enc.to_sorted(g) for g in gb.basis]
    r, _ = _kernel.normal_form(enc.to_sorted(f), basis, gb.ring.characteristic, enc.sgn)
    return enc.from_sorted(gb.ring, r)


def ideal_membership(f: Polynomial, ideal: Ideal) -> bool:
    if f.ring != ideal.ring:
        raise ValueError(f"ring mismatch: {f.ring} vs {ideal.ring}")
    if f.is_zero():
        return True
    return groebner_basis(ideal).contains(f)


def ideal_contains(big: Ideal, small: Ideal) -> bool:
    """small ⊆ big."""
    if not small.generators:
        return True
    gb = groebner_basis(big)
    return all(gb.contains(g) for g in small.generators)


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    return groebner_basis(a).basis == groebner_basis(b).basis


def is_unit_ideal(ideal: Ideal) -> bool:
    return groebner_basis(ideal).is_unit()


def eliminate(ideal: Ideal, names: Iterable[str]) -> Ideal:
    """Generators of ideal ∩ k[remaining variables] (still in the full ring)."""
    names = tuple(n for n in ideal.ring.variables if n in set(names))
    for n in names:
        ideal.ring.index(n)
    if not names:
        return Ideal(ideal.ring, groebner_basis(ideal).basis)
    gb = groebner_basis(ideal, MonomialOrder.block(names))
    drop = set(names)
    return Ideal(ideal.ring, [g for g in gb.basis if not (g.support() & drop)])


def eliminate_to_subring(ideal: Ideal, names: Iterable[str]) -> Ideal:
    """Like :func:`eliminate` but returned in the subring without ``names``."""
    names = list(names)
    sub = ideal.ring.drop(names)
    return Ideal(sub, [g.change_ring(sub) for g in eliminate(ideal, names)])


def _fresh_name(ring: RingSpec, stem: str = "s_") -> str:
    k = 0
    while f"{stem}{k}" in ring.variables:
        k += 1
    return f"{stem}{k}"


def saturate(ideal: Ideal, f: Polynomial) -> Ideal:
    """I : f^∞ via I + ⟨1 - s f⟩ ∩ k[x]."""
    if f.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    ring = ideal.ring
    s = _fresh_name(ring)
    big = ring.extend([s], front=True)
    gens = [g.change_ring(big) for g in ideal.generators]
    gens.append(big.one() - big.var(s) * f.change_ring(big))
    out = eliminate_to_subring(Ideal(big, gens), [s])
    return Ideal(ring, [g.change_ring(ring) for g in out.generators])


def radical_contains(ideal: Ideal, f: Polynomial) -> bool:
    """f ∈ rad(I) via the Rabinowitsch trick."""
    ring = ideal.ring
    s = _fresh_name(ring)
    big = ring.extend([s], front=True)
    gens = [g.change_ring(big) for g in ideal.generators]
    gens.append(big.one() - big.var(s) * f.change_ring(big))
    return is_unit_ideal(Ideal(big, gens))


def krull_dimension(ideal: Ideal) -> int:
    """Dimension of k[x]/I from the grevlex staircase (-1 for the unit ideal)."""
    gb = groebner_basis(ideal)
    if gb.is_unit():
        return -1
    lms = [frozenset(i for i, x in enumerate(e) if x) for e in gb.leading_monomials()]
    n = ideal.ring.nvars
    best = 0

    def rec(start, chosen):
        nonlocal best
        best = max(best, len(chosen))
        for i in range(start, n):
            cand = chosen | {i}
            if all(not lm <= cand for lm in lms):
                rec(i + 1, cand)

    rec(0, frozenset())
    return best


def standard_monomial_count(ideal: Ideal) -> int | None:
    """dim_k k[x]/I, or None when the quotient is infinite dimensional."""
    gb = groebner_basis(ideal)
    if gb.is_unit():
        return 0
    lms = gb.leading_monomials()
    n = ideal.ring.nvars
    bounds = [None] * n
    for e in lms:
        nz = [i for i, x in enumerate(e) if x]
        if len(nz) == 1:
            i = nz[0]
            bounds[i] = e[i] if bounds[i] is None else min(bounds[i], e[i])
    if any(b is None for b in bounds):
        return None
    count = 0

    def rec(i, prefix):
        nonlocal count
        if i == n:
            count += 1
            return
        for a in range(bounds[i]):
            e = prefix + (a,)
            # prune: any leading monomial dividing the partial exponent
            if any(all(lm[t] <= e[t] for t in range(i + 1)) and not any(lm[i + 1:])
                   for lm in lms):
                continue
            rec(i + 1, e)

    rec(0, ())
    return count
