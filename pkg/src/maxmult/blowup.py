"""Affine charts of blow-ups at coordinate centers and the transforms along them.

Chart coordinates reuse the ambient names: on the ``x_i``-chart the new
``x_j`` (j != i in the center) stands for ``x_j / x_i`` and ``x_i`` is the
equation of the exceptional divisor.  Translations of the center are
applied first and kept in the chart coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

from maxmult.errors import NotPermissibleError
from maxmult.groebner import ideal_equal, saturate, groebner_basis
from maxmult.points import CoordinatePrime, order_at_coordinate_prime
from maxmult.rees import ReesAlgebra
from maxmult.ring import Ideal, Polynomial, RingSpec
from maxmult.tower import Tower


@dataclass(frozen=True)
class BlowupChart:
    ring: RingSpec
    center: CoordinatePrime
    chart_var: str

    def __post_init__(self):
        self.center.check(self.ring)
        if self.chart_var not in self.center.vars:
            raise ValueError(f"chart variable {self.chart_var} is not a center variable")

    @property
    def substitution(self) -> dict:
        R = self.ring
        xi = R.var(self.chart_var)
        return {v: (xi * R.var(v) if v != self.chart_var else xi) for v in self.center.vars}

    @property
    def exceptional(self) -> Polynomial:
        return self.ring.var(self.chart_var)

    def pullback(self, f: Polynomial) -> Polynomial:
        """Total transform: translate, then x_j -> x_i x_j."""
        g = f.translate(self.center.shift)
        n = self.ring.nvars
        i = self.ring.index(self.chart_var)
        cvars = {self.ring.index(v) for v in self.center.vars}
        rows = []
        for k in range(n):
            if k == i:
                rows.append([1 if j in cvars else 0 for j in range(n)])
            else:
                rows.append([1 if j == k else 0 for j in range(n)])
        return g.monomial_map(rows, self.ring)

    def as_dict(self) -> dict:
        return {"center": self.center.as_dict(), "chart": self.chart_var}


def blowup_charts(ring: RingSpec, center: CoordinatePrime) -> list:
    center.check(ring)
    return [BlowupChart(ring, center, v) for v in center.vars]


def _exceptional_power(f: Polynomial, var: str) -> int:
    i = f.ring.index(var)
    return min(e[i] for e in f.terms)


def strict_transform(I: Ideal, chart: BlowupChart) -> Ideal:
    """Saturation of the total transform by the exceptional divisor.

    When the generator-wise quotients already generate the saturation they
    are returned (this is the readable form); otherwise the reduced
    Gröbner basis of the saturation.
    """
    total = [chart.pullback(g) for g in I.generators]
    if not total:
        return Ideal(I.ring)
    E = chart.exceptional
    sat = saturate(Ideal(I.ring, total), E)
    divided = Ideal(I.ring, [g.divide_by_var_power(chart.chart_var, _exceptional_power(g, chart.chart_var))
                             for g in total if g])
    if ideal_equal(divided, sat):
        return divided
    return Ideal(I.ring, groebner_basis(sat).basis)


def _weak_divide(f: Polynomial, w: int, chart: BlowupChart) -> Polynomial:
    g = chart.pullback(f)
    q = g.divide_by_var_power(chart.chart_var, w)
    if q is None:
        raise NotPermissibleError(
            f"center {chart.center.to_text()} not permissible: {f.to_text()} has order "
            f"{order_at_coordinate_prime(f, chart.center)} < {w}")
    return q


def weak_transform(G: ReesAlgebra, chart: BlowupChart) -> ReesAlgebra:
    """Each f W^N becomes (pullback f)/E^N W^N; requires exact divisibility."""
    if G.ring != chart.ring:
        raise ValueError("chart and algebra live over different rings")
    gens = [(_weak_divide(f, w, chart), w) for f, w in G.gens]
    mod = strict_transform(G.modulo, chart) if G.modulo is not None else None
    return ReesAlgebra(G.ring, gens, mod)


def tower_transform(tower: Tower, center: CoordinatePrime, chart_var: str) -> Tower:
    """Chartwise blow-up of a presented finite morphism.

    Relations become weak transforms of ``f_i W^{d_i}``; base relations
    become strict transforms.
    """
    ring = tower.ring
    center.check(ring)
    if chart_var not in tower.base_vars:
        raise NotPermissibleError(f"chart variable {chart_var} must be a base variable")
    for z, f in tower.steps:
        d = f.degree_in(z)
        if order_at_coordinate_prime(f, center) < d:
            raise NotPermissibleError(
                f"center {center.to_text()} not permissible: relation {f.to_text()} "
                f"has order {order_at_coordinate_prime(f, center)} < {d}")
    chart = BlowupChart(ring, center, chart_var)
    steps = []
    for z, f in tower.steps:
        steps.append((z, _weak_divide(f, f.degree_in(z), chart)))
    base = ()
    if tower.base_relations:
        base = strict_transform(Ideal(ring, tower.base_relations), chart).generators
    return Tower(ring, tower.base_vars, tuple(steps), tuple(base))
