import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from maxmult import (
    BudgetExceeded,
    Ideal,
    MonomialOrder,
    RingSpec,
    eliminate,
    gb_budget,
    groebner_basis,
    ideal_equal,
    ideal_membership,
    normal_form,
    saturate,
)
from maxmult.groebner import (
    eliminate_to_subring,
    ideal_contains,
    is_unit_ideal,
    krull_dimension,
    radical_contains,
    standard_monomial_count,
)
from strategies import from_sympy, nonzero_polys, polys, to_sympy

QQ3 = RingSpec(0, ("x", "y", "z"))
F5_3 = RingSpec(5, ("x", "y", "z"))


def sympy_gb(ideal: Ideal):
    exprs = [to_sympy(g)[0] for g in ideal.generators]
    syms = sympy.symbols(ideal.ring.variables)
    p = ideal.ring.characteristic
    opts = {"modulus": p} if p else {"domain": "QQ"}
    G = sympy.groebner(exprs, *syms, order="grevlex", **opts)
    return {from_sympy(g.as_expr(), ideal.ring).monic() for g in G.exprs}


def test_spec_basis_example():
    R = RingSpec(0, ("x", "y"))
    gb = groebner_basis(Ideal.parse(R, ["y^2 - x^3", "x"]))
    assert set(gb.basis) == {R.parse("x"), R.parse("y^2")}


def test_membership_x3_not_in_ideal():
    # x^3 = y^2 modulo y^2 - x^3, and y^2 itself is not in the ideal: the
    # quotient by <x^4, y^2 - x^3> has length 8, by <x^3, y^2> only 6.
    R = RingSpec(0, ("x", "y"))
    I = Ideal.parse(R, ["x^4", "y^2 - x^3"])
    assert not ideal_membership(R.parse("x^3"), I)
    assert standard_monomial_count(I) == 8
    assert standard_monomial_count(Ideal.parse(R, ["x^3", "y^2"])) == 6
    x, y = sympy.symbols("x y")
    G = sympy.groebner([x**4, y**2 - x**3], x, y, order="grevlex")
    assert not G.contains(x**3)


def test_elimination_char2():
    R = RingSpec(2, ("x", "y"))
    I = Ideal.parse(R, ["x^4", "y^2 - x^3"])
    E = eliminate_to_subring(I, ["y"])
    assert set(groebner_basis(E).basis) == {E.ring.parse("x^4")}
    assert not ideal_membership(R.parse("x^3"), I)


def test_saturation_strict_transform():
    R = RingSpec(0, ("t", "x", "y"))
    I = Ideal(R, [R.parse("t^4") * R.parse("y^4 - t^9*x^13")])
    S = saturate(I, R.parse("t"))
    assert ideal_equal(S, Ideal.parse(R, ["y^4 - t^9*x^13"]))


def test_budget_exceeded():
    R = RingSpec(0, ("a", "b", "c", "d"))
    cyclic4 = Ideal.parse(R, ["a+b+c+d", "a*b+b*c+c*d+d*a", "a*b*c+b*c*d+c*d*a+d*a*b", "a*b*c*d-1"])
    with gb_budget(3):
        with pytest.raises(BudgetExceeded) as err:
            groebner_basis(cyclic4)
    assert err.value.exit_code == 4


def test_block_order_eliminates_named_vars():
    R = RingSpec(0, ("x", "y", "z"))
    order = MonomialOrder.block(["z"])
    gb = groebner_basis(Ideal.parse(R, ["z - x*y", "z^2 - x"]), order)
    kept = [g for g in gb.basis if g.degree_in("z") == 0]
    assert kept and all(ideal_membership(g, Ideal.parse(R, ["z - x*y", "z^2 - x"])) for g in kept)


def test_dimension_and_counts():
    R = RingSpec(0, ("x", "y", "z"))
    assert krull_dimension(Ideal.parse(R, ["x*y", "x*z"])) == 2
    assert krull_dimension(Ideal.parse(R, ["x", "y", "z"])) == 0
    assert standard_monomial_count(Ideal.parse(R, ["x^2", "y^3", "z"])) == 6
    assert standard_monomial_count(Ideal.parse(R, ["x"])) is None
    assert is_unit_ideal(Ideal.parse(R, ["x", "x - 1"]))


def test_radical_membership():
    R = RingSpec(0, ("x", "y"))
    I = Ideal.parse(R, ["x^3", "y^2"])
    assert radical_contains(I, R.parse("x + y"))
    assert not radical_contains(I, R.parse("x + 1"))


@pytest.mark.property
@given(st.data())
def test_reduced_basis_matches_sympy(data):
    ring = data.draw(st.sampled_from([QQ3, F5_3]))
    gens = data.draw(st.lists(nonzero_polys(ring, max_terms=3, max_deg=2), min_size=1, max_size=3))
    I = Ideal(ring, gens)
    assume(not I.is_zero())
    assert set(groebner_basis(I).basis) == sympy_gb(I)


@pytest.mark.property
@given(st.data())
def test_basis_is_reduced(data):
    ring = data.draw(st.sampled_from([QQ3, F5_3]))
    gens = data.draw(st.lists(nonzero_polys(ring, max_terms=3, max_deg=3), min_size=1, max_size=3))
    gb = groebner_basis(Ideal(ring, gens))
    leads = gb.leading_monomials()
    for i, a in enumerate(leads):
        for j, b in enumerate(leads):
            if i != j:
                assert not all(u <= v for u, v in zip(a, b))
    for g in gens:
        assert normal_form(g, gb).is_zero()


@pytest.mark.property
@given(st.data())
def test_membership_soundness(data):
    ring = data.draw(st.sampled_from([QQ3, F5_3]))
    gens = data.draw(st.lists(nonzero_polys(ring, max_terms=3, max_deg=2, min_deg=1), min_size=1, max_size=3))
    mults = data.draw(st.lists(polys(ring, max_terms=3, max_deg=2), min_size=len(gens), max_size=len(gens)))
    I = Ideal(ring, gens)
    f = ring.zero()
    for g, m in zip(gens, mults):
        f = f + g * m
    assert ideal_membership(f, I)
    # every generator vanishes at the origin, so a nonzero constant is outside
    assert not ideal_membership(f + ring.one(), I)


@pytest.mark.property
@given(st.data())
def test_elimination_is_sub_and_monotone(data):
    ring = F5_3
    gens = data.draw(st.lists(nonzero_polys(ring, max_terms=3, max_deg=2), min_size=1, max_size=2))
    extra = data.draw(nonzero_polys(ring, max_terms=3, max_deg=2))
    I = Ideal(ring, gens)
    J = Ideal(ring, gens + [extra])
    EI = eliminate(I, ["z"])
    EJ = eliminate(J, ["z"])
    for g in EI.generators:
        assert g.degree_in("z") == 0
        assert ideal_membership(g, I)
        assert ideal_membership(g, J)
    assert ideal_contains(EJ, EI)
