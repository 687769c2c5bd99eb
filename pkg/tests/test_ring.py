import math
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from maxmult import CoordinatePrime, Ideal, RingSpec, hasse_derivative, order_at_coordinate_prime
from maxmult.errors import ParseError, UndefinedOrderError
from maxmult.points import ideal_order_at_coordinate_prime
from maxmult.ring import binomial
from strategies import CHARS, nonzero_polys, polys, to_sympy

R2 = {p: RingSpec(p, ("x", "y")) for p in CHARS}
R3 = {p: RingSpec(p, ("x", "y", "z")) for p in CHARS}
ALPHAS = [a for a in product(range(4), repeat=2) if sum(a) <= 3]


def test_parse_two_terms():
    f = RingSpec(0, ("t", "x", "y")).parse("y^4 - x^13")
    assert len(f.terms) == 2
    assert f.terms == {(0, 0, 4): 1, (0, 13, 0): -1}


def test_parse_errors():
    R = R2[0]
    for bad in ["y^", "x +", "3**x", "w", "(x"]:
        with pytest.raises(ParseError):
            R.parse(bad)


def test_char_p_coefficients_reduce():
    R = R2[2]
    assert R.parse("3*x + 2*y") == R.parse("x")
    assert R.parse("x^2 - 1") == R.parse("x^2 + 1")


def test_rational_coefficients():
    R = R2[0]
    f = R.parse("1/2*x - 3/4")
    assert f.terms[(1, 0)] == Fraction(1, 2)
    assert R.parse(f.to_text()) == f


def test_hasse_example_85():
    R = RingSpec(0, ("x", "T"))
    f = R.parse("T^3 + x^3*T + x^7")
    assert hasse_derivative(f, (0, 2)) == R.parse("3*T")


def test_hasse_char2_cusp():
    R = R2[2]
    f = R.parse("y^2 - x^3")
    assert hasse_derivative(f, (1, 0)) == R.parse("x^2")
    assert hasse_derivative(f, (0, 1)).is_zero()
    assert hasse_derivative(f, (0, 2)) == R.one()


@pytest.mark.parametrize("n,k", [(n, k) for n in range(12) for k in range(n + 2)])
@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_binomial_matches_math(n, k, p):
    expect = math.comb(n, k)
    assert binomial(n, k, p) == (expect % p if p else expect)


@pytest.mark.property
@given(st.data())
def test_arithmetic_matches_sympy(data):
    R = R3[0]
    f = data.draw(polys(R))
    g = data.draw(polys(R))
    ef, syms = to_sympy(f)
    eg, _ = to_sympy(g)
    assert sympy.expand(to_sympy(f * g)[0] - ef * eg) == 0
    assert sympy.expand(to_sympy(f - g)[0] - (ef - eg)) == 0


@pytest.mark.property
@given(st.data())
def test_text_round_trip(data):
    p = data.draw(st.sampled_from(CHARS))
    f = data.draw(polys(R3[p], max_terms=6))
    assert R3[p].parse(f.to_text()) == f


@pytest.mark.property
@given(st.data())
def test_hasse_char0_is_scaled_derivative(data):
    R = R2[0]
    f = data.draw(polys(R, max_deg=5))
    a = data.draw(st.sampled_from(ALPHAS))
    ef, (x, y) = to_sympy(f)
    d = sympy.diff(ef, x, a[0], y, a[1]) if any(a) else ef
    expect = d / (math.factorial(a[0]) * math.factorial(a[1]))
    assert sympy.expand(to_sympy(hasse_derivative(f, a))[0] - expect) == 0


@pytest.mark.property
@pytest.mark.parametrize("p", CHARS)
@given(data=st.data())
def test_hasse_leibniz(p, data):
    R = R2[p]
    f = data.draw(polys(R, max_deg=4))
    g = data.draw(polys(R, max_deg=4))
    a = data.draw(st.sampled_from(ALPHAS))
    rhs = R.zero()
    for b in product(range(a[0] + 1), range(a[1] + 1)):
        c = (a[0] - b[0], a[1] - b[1])
        rhs = rhs + hasse_derivative(f, b) * hasse_derivative(g, c)
    assert hasse_derivative(f * g, a) == rhs


@pytest.mark.property
@pytest.mark.parametrize("p", CHARS)
@given(data=st.data())
def test_hasse_composition(p, data):
    R = R2[p]
    f = data.draw(polys(R, max_deg=6))
    a = data.draw(st.sampled_from(ALPHAS))
    b = data.draw(st.sampled_from(ALPHAS))
    s = (a[0] + b[0], a[1] + b[1])
    c = math.comb(s[0], a[0]) * math.comb(s[1], a[1])
    assert hasse_derivative(hasse_derivative(f, b), a) == hasse_derivative(f, s).scale(c)


@pytest.mark.property
@given(st.data())
def test_order_is_a_valuation(data):
    p = data.draw(st.sampled_from(CHARS))
    R = R3[p]
    origin = CoordinatePrime.origin(R)
    f = data.draw(nonzero_polys(R))
    g = data.draw(nonzero_polys(R))
    of = order_at_coordinate_prime(f, origin)
    og = order_at_coordinate_prime(g, origin)
    assert order_at_coordinate_prime(f * g, origin) == of + og
    if not (f + g).is_zero():
        assert order_at_coordinate_prime(f + g, origin) >= min(of, og)


@pytest.mark.property
@given(st.data())
def test_order_at_translated_point(data):
    R = R2[0]
    f = data.draw(nonzero_polys(R))
    a = data.draw(st.integers(-2, 2))
    b = data.draw(st.integers(-2, 2))
    pt = CoordinatePrime(["x", "y"], {"x": a, "y": b})
    ef, (x, y) = to_sympy(f)
    shifted = sympy.Poly(sympy.expand(ef.subs({x: x + a, y: y + b}, simultaneous=True)), x, y)
    lowest = min(sum(m) for m in shifted.monoms())
    assert order_at_coordinate_prime(f, pt) == lowest


def test_order_examples():
    R = RingSpec(2, ("t", "x", "y", "z"))
    assert order_at_coordinate_prime(R.parse("z^2 - t*x^5"), CoordinatePrime(["t", "y", "z"])) == 1
    R = RingSpec(0, ("t", "x", "y"))
    assert order_at_coordinate_prime(R.parse("y^4 - x^13"), CoordinatePrime(["t", "x", "y"])) == 4
    with pytest.raises(UndefinedOrderError):
        order_at_coordinate_prime(R.zero(), CoordinatePrime(["t"]))


def test_ideal_order_examples():
    R = R2[0]
    o = CoordinatePrime.origin(R)
    assert ideal_order_at_coordinate_prime(Ideal.parse(R, ["x^2", "x*y"]), o) == 2
    assert ideal_order_at_coordinate_prime(Ideal.parse(R, ["x^4", "y^2 - x^3"]), o) == 2
    assert ideal_order_at_coordinate_prime(Ideal.parse(R, ["1"]), o) == 0
