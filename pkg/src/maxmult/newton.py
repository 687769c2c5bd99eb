"""Newton polyhedra of monomial ideals and weighted monomial algebras.

Everything is exact: a small two-phase simplex over ``Fraction`` with
Bland's rule decides membership and produces a separating monomial
valuation when the answer is negative.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def simplex_minimize(c: Sequence, A: Sequence[Sequence], b: Sequence):
    """Minimize c.x subject to A x = b, x >= 0.

    Returns ``("optimal", x, value)``, ``("infeasible", None, None)`` or
    ``("unbounded", None, None)``.
    """
    m = len(A)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # phase 1 tableau: columns 0..n-1 original, n..n+m-1 artificial
    width = n + m
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(r, col):
        pv = T[r][col]
        T[r] = [v / pv for v in T[r]]
        for i in range(m):
            if i != r and T[i][col]:
                f = T[i][col]
                T[i] = [a - f * bb for a, bb in zip(T[i], T[r])]
        basis[r] = col

    def run(cost, allowed):
        while True:
            # reduced costs
            red = []
            for j in range(width):
                if j not in allowed or j in basis:
                    continue
                rc = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))
                if rc < 0:
                    red.append(j)
            if not red:
                return "optimal"
            col = min(red)  # Bland
            best = None
            for i in range(m):
                if T[i][col] > 0:
                    ratio = T[i][-1] / T[i][col]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(best[1], col)

    cost1 = [Fraction(0)] * n + [Fraction(1)] * m
    run(cost1, set(range(width)))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) > 0:
        return "infeasible", None, None
    # drive remaining artificial variables out of the basis
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    cost2 = [Fraction(v) for v in c] + [Fraction(0)] * m
    status = run(cost2, set(range(n)))
    if status == "unbounded":
        return "unbounded", None, None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return "optimal", x, sum(Fraction(ci) * xi for ci, xi in zip(c, x))


def newton_membership(point: Sequence[int], gens: Sequence, level: int = 1):
    """Is ``point / level`` in conv{e / w : (e, w) in gens} + R_{>=0}^n ?

    Returns ``(True, lambdas)`` or ``(False, c)`` where ``c >= 0`` is a
    monomial valuation with ``c.e >= w`` for every generator and
    ``c.point < level`` (the separating certificate).
    """
    n = len(point)
    gens = [(tuple(e), int(w)) for e, w in gens]
    if not gens:
        return False, None
    # primal: lambda_g >= 0, s_i >= 0 with sum lambda_g (e_g / w_g) + s = point/level,
    # sum lambda = 1
    A = []
    for i in range(n):
        A.append([Fraction(e[i], w) for e, w in gens] + [Fraction(int(i == k)) for k in range(n)])
    A.append([Fraction(1)] * len(gens) + [Fraction(0)] * n)
    b = [Fraction(point[i], level) for i in range(n)] + [Fraction(1)]
    status, x, _ = simplex_minimize([0] * (len(gens) + n), A, b)
    if status == "optimal":
        return True, x[: len(gens)]
    # dual certificate: minimize c.point s.t. c.e_g - t_g = w_g, c >= 0, t >= 0
    k = len(gens)
    A2 = [[Fraction(e[i]) for i in range(n)] + [Fraction(-int(j == g)) for j in range(k)]
          for g, (e, w) in enumerate(gens)]
    b2 = [Fraction(w) for _, w in gens]
    cost = [Fraction(v) for v in point] + [Fraction(0)] * k
    status, y, val = simplex_minimize(cost, A2, b2)
    if status != "optimal" or val >= level:
        raise ArithmeticError("Newton polyhedron duality failed")  # cannot happen for valid input
    return False, y[:n]


def certificate_holds(c: Sequence, point: Sequence[int], gens: Sequence, level: int = 1) -> bool:
    """Independent check of a separating valuation."""
    val = lambda e: sum(Fraction(ci) * ei for ci, ei in zip(c, e))
    return (all(ci >= 0 for ci in c) and all(val(e) >= w for e, w in gens)
            and val(point) < level)
