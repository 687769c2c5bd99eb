"""Hypothesis strategies and small oracles shared by the test modules."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from maxmult import Polynomial, RingSpec

CHARS = [0, 2, 3, 5]


def polys(ring: RingSpec, max_terms: int = 5, max_deg: int = 3, min_deg: int = 0, coeffs=(-4, 4)):
    n = ring.nvars
    exps = st.tuples(*[st.integers(0, max_deg)] * n).filter(lambda e: sum(e) >= min_deg)
    return st.dictionaries(exps, st.integers(*coeffs), max_size=max_terms).map(
        lambda d: Polynomial.from_terms(ring, d))


def nonzero_polys(ring: RingSpec, **kw):
    return polys(ring, **kw).filter(lambda f: not f.is_zero())


def to_sympy(f: Polynomial):
    syms = sympy.symbols(f.ring.variables)
    env = dict(zip(f.ring.variables, syms))
    text = f.to_text().replace("^", "**")
    return sympy.sympify(text, locals=env), syms


def from_sympy(expr, ring: RingSpec) -> Polynomial:
    syms = sympy.symbols(ring.variables)
    poly = sympy.Poly(sympy.expand(expr), *syms, domain="QQ")
    terms = {e: Fraction(int(c.p), int(c.q)) for e, c in poly.terms()}
    return Polynomial.from_terms(ring, terms)
