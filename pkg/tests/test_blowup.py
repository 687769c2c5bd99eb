import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxmult import (
    BlowupChart,
    CoordinatePrime,
    Ideal,
    NotPermissibleError,
    Polynomial,
    ReesAlgebra,
    RingSpec,
    Tower,
    blowup_charts,
    diff_saturate,
    ideal_equal,
    ideal_membership,
    order_at_coordinate_prime,
    saturate,
    strict_transform,
    tower_transform,
    weak_transform,
)
from maxmult.rees import in_sing, sing_is_empty
from strategies import CHARS, polys

F2 = {n: RingSpec(2, tuple(n)) for n in ("tx", "txy", "txyz", "xy", "x")}
TXYZ = F2["txyz"]
XP_IDEAL = Ideal.parse(TXYZ, ["z^2 - x^5", "y^4 - x^13"])
ORIGIN4 = CoordinatePrime(["t", "x", "y", "z"])


def same(polys, texts):
    polys = list(polys)
    return len(polys) == len(texts) and set(polys) == {polys[0].ring.parse(t) for t in texts}


def test_charts_of_origin_in_txyz():
    charts = blowup_charts(TXYZ, CoordinatePrime(["t", "x", "y"]))
    assert [c.chart_var for c in charts] == ["t", "x", "y"]
    sub = charts[0].substitution
    assert sub["x"] == TXYZ.parse("t*x") and sub["y"] == TXYZ.parse("t*y") and sub["t"] == TXYZ.parse("t")
    assert "z" not in sub
    assert charts[0].pullback(TXYZ.parse("z")) == TXYZ.parse("z")


def test_divisorial_center_is_identity():
    R = F2["x"]
    (chart,) = blowup_charts(R, CoordinatePrime(["x"]))
    assert chart.pullback(R.parse("x^3 + x")) == R.parse("x^3 + x")
    assert chart.exceptional == R.parse("x")


def test_second_blowup_chart_fixes_x():
    chart = BlowupChart(TXYZ, CoordinatePrime(["t", "y", "z"]), "t")
    assert chart.pullback(TXYZ.parse("x*y*z")) == TXYZ.parse("t^2*x*y*z")


def test_chart_variable_must_be_in_center():
    with pytest.raises(ValueError):
        BlowupChart(TXYZ, CoordinatePrime(["t", "y"]), "x")


def test_strict_transforms_74():
    R = F2["txy"]
    c1 = BlowupChart(R, CoordinatePrime(["t", "x", "y"]), "t")
    assert same(strict_transform(Ideal.parse(R, ["y^4 - x^13"]), c1).generators, ["y^4 - t^9*x^13"])
    first = strict_transform(XP_IDEAL, BlowupChart(TXYZ, ORIGIN4, "t"))
    assert same(first.generators, ["y^4 - t^9*x^13", "z^2 - t^3*x^5"])
    second = strict_transform(first, BlowupChart(TXYZ, CoordinatePrime(["t", "y", "z"]), "t"))
    assert same(second.generators, ["y^4 - t^5*x^13", "z^2 - t*x^5"])


def test_strict_transform_is_saturated():
    chart = BlowupChart(TXYZ, ORIGIN4, "x")
    S = strict_transform(XP_IDEAL, chart)
    assert ideal_equal(saturate(S, chart.exceptional), S)


def test_weak_transform_522():
    R = F2["xy"]
    G = ReesAlgebra.parse(R, [("x^2", 1), ("y^2 - x^3", 2)])
    Gx = weak_transform(G, BlowupChart(R, CoordinatePrime(["x", "y"]), "x"))
    assert Gx.gens == ReesAlgebra.parse(R, [("x", 1), ("y^2 - x", 2)]).gens
    assert sing_is_empty(Gx)
    R1 = F2["x"]
    G1 = weak_transform(ReesAlgebra.parse(R1, [("x^2", 1)]), BlowupChart(R1, CoordinatePrime(["x"]), "x"))
    assert [(f.to_text(), w) for f, w in G1.gens] == [("x", 1)]
    assert not sing_is_empty(G1)


def test_weak_transform_order_one():
    R = RingSpec(0, ("x", "y"))
    G = ReesAlgebra.parse(R, [("x*y + x^2", 1)])
    out = weak_transform(G, BlowupChart(R, CoordinatePrime(["x"]), "x"))
    assert out.gens[0][0] == R.parse("y + x")


def test_weak_transform_rejects_non_permissible_center():
    R = F2["xy"]
    G = ReesAlgebra.parse(R, [("y^2 - x", 2)])
    with pytest.raises(NotPermissibleError) as err:
        weak_transform(G, BlowupChart(R, CoordinatePrime(["x", "y"]), "x"))
    assert err.value.exit_code == 3


def test_tower_transforms_74():
    Xp = Tower.build(2, ["t", "x"], [("y", "y^4 - x^13"), ("z", "z^2 - x^5")])
    Xp1 = tower_transform(Xp, ORIGIN4, "t")
    assert same(Xp1.relations, ["y^4 - t^9*x^13", "z^2 - t^3*x^5"])
    Xp2 = tower_transform(Xp1, CoordinatePrime(["t", "y", "z"]), "t")
    assert same(Xp2.relations, ["y^4 - t^5*x^13", "z^2 - t*x^5"])


def test_trivial_tower_transform_is_strict_transform_of_base():
    T = Tower.build(0, ["x", "y"], [], ["y^2 - x^3"])
    T1 = tower_transform(T, CoordinatePrime(["x", "y"]), "x")
    assert [g.to_text() for g in T1.base_relations] == ["y^2 - x"]
    assert T1.steps == ()


def test_tower_transform_chart_must_be_base_variable():
    Xp = Tower.build(2, ["t", "x"], [("y", "y^4 - x^13"), ("z", "z^2 - x^5")])
    with pytest.raises(NotPermissibleError):
        tower_transform(Xp, ORIGIN4, "z")
    X = Tower.build(2, ["t", "x"], [("y", "y^2 - x")])
    with pytest.raises(NotPermissibleError):
        tower_transform(X, CoordinatePrime(["t", "x", "y"]), "t")


# -- chart overlap -------------------------------------------------------------------

def _t_to_x(g: Polynomial) -> Polynomial:
    """t-chart coordinates in terms of x-chart ones, times a power of the x-chart t.

    With (t', x', y', z') the t-chart and (t'', x'', y'', z'') the x-chart of
    the origin: t' = t'' x'', x' = 1/t'', y' = y''/t'', z' = z''/t''.
    """
    K = max(e[1] + e[2] + e[3] for e in g.terms)
    return Polynomial.from_terms(g.ring, {
        (a - b - c - d + K, a, c, d): v for (a, b, c, d), v in g.terms.items()})


def _x_to_t(g: Polynomial) -> Polynomial:
    """x-chart coordinates in terms of t-chart ones: t'' = 1/x', x'' = x' t', y'' = y'/x', z'' = z'/x'."""
    K = max(e[0] + e[2] + e[3] for e in g.terms)
    return Polynomial.from_terms(g.ring, {
        (b, b - a - c - d + K, c, d): v for (a, b, c, d), v in g.terms.items()})


ST_T = strict_transform(XP_IDEAL, BlowupChart(TXYZ, ORIGIN4, "t"))
ST_X = strict_transform(XP_IDEAL, BlowupChart(TXYZ, ORIGIN4, "x"))
LOC_X = saturate(ST_X, TXYZ.var("t"))
LOC_T = saturate(ST_T, TXYZ.var("x"))


def test_chart_overlap_generators():
    for g in ST_T.generators:
        assert ideal_membership(_t_to_x(g), LOC_X)
    for g in ST_X.generators:
        assert ideal_membership(_x_to_t(g), LOC_T)


@pytest.mark.property
@given(st.data())
def test_chart_overlap_random_elements(data):
    mults = data.draw(st.lists(polys(TXYZ, max_terms=3, max_deg=2), min_size=2, max_size=2))
    src, conv, target = data.draw(st.sampled_from([(ST_T, _t_to_x, LOC_X), (ST_X, _x_to_t, LOC_T)]))
    f = TXYZ.zero()
    for g, m in zip(src.generators, mults):
        f = f + g * m
    if not f.is_zero():
        assert ideal_membership(conv(f), target)


# -- weak transform exactness and permissibility --------------------------------------

def _permissible_gens(R, data):
    n = data.draw(st.integers(1, 2))
    gens = []
    for _ in range(n):
        w = data.draw(st.integers(1, 3))
        f = data.draw(polys(R, max_terms=4, max_deg=5, min_deg=w).filter(lambda f: not f.is_zero()))
        gens.append((f, w))
    return gens


@pytest.mark.property
@given(st.data())
def test_weak_transform_exact_divisibility(data):
    p = data.draw(st.sampled_from(CHARS))
    R = RingSpec(p, ("x", "y", "z"))
    G = ReesAlgebra(R, _permissible_gens(R, data))
    center = CoordinatePrime(data.draw(st.sampled_from([["x", "y", "z"], ["x", "y"], ["y", "z"]])))
    chart = BlowupChart(R, center, data.draw(st.sampled_from(center.vars)))
    if any(order_at_coordinate_prime(f, center) < w for f, w in G.gens):
        with pytest.raises(NotPermissibleError):
            weak_transform(G, chart)
        return
    out = weak_transform(G, chart)
    E = chart.exceptional
    # generators are stored monic; multiplying by a monomial keeps them monic
    assert {(g * E ** w, w) for g, w in out.gens} == {(chart.pullback(f).monic(), w) for f, w in G.gens}


@pytest.mark.property
@given(st.data())
def test_permissibility_survives_saturation(data):
    p = data.draw(st.sampled_from(CHARS))
    R = RingSpec(p, ("x", "y"))
    G = ReesAlgebra(R, _permissible_gens(R, data))
    origin = CoordinatePrime(["x", "y"])
    assert in_sing(G, origin)
    assert in_sing(diff_saturate(G), origin)
    weak_transform(diff_saturate(G), BlowupChart(R, origin, "x"))
