from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.optimize import linprog

from maxmult.newton import certificate_holds, newton_membership, simplex_minimize

small = st.integers(0, 5)


def scipy_inside(point, gens, level):
    """Feasibility of point/level = sum l_g e_g/w_g + s, sum l = 1, l, s >= 0."""
    n = len(point)
    A = [[e[i] / w for e, w in gens] + [float(i == k) for k in range(n)] for i in range(n)]
    A.append([1.0] * len(gens) + [0.0] * n)
    b = [p / level for p in point] + [1.0]
    res = linprog(np.zeros(len(gens) + n), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    return res.status == 0


def test_simplex_small_lp():
    status, x, val = simplex_minimize([1, 1], [[1, 2]], [4])
    assert status == "optimal" and val == 2 and x == [0, 2]
    assert simplex_minimize([1], [[1], [1]], [1, 2])[0] == "infeasible"
    assert simplex_minimize([-1, 0], [[1, -1]], [0])[0] == "unbounded"


@pytest.mark.property
@given(st.data())
def test_simplex_matches_scipy(data):
    m = data.draw(st.integers(1, 3))
    n = data.draw(st.integers(2, 4))
    A = [[data.draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(m)]
    b = [data.draw(st.integers(0, 6)) for _ in range(m)]
    c = [data.draw(st.integers(-2, 3)) for _ in range(n)]
    status, x, val = simplex_minimize(c, A, b)
    res = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[res.status]
    assert status == expected
    if status == "optimal":
        assert all(xi >= 0 for xi in x)
        assert all(sum(Fraction(a) * xi for a, xi in zip(row, x)) == bi for row, bi in zip(A, b))
        assert abs(float(val) - res.fun) < 1e-7


def test_membership_vectors():
    assert newton_membership((1, 1), [((2, 0), 1), ((0, 2), 1)])[0]
    inside, cert = newton_membership((1,), [((2,), 1)])
    assert not inside and certificate_holds(cert, (1,), [((2,), 1)])
    assert newton_membership((2, 2), [((3, 0), 1), ((0, 3), 1)])[0]
    # weighted generators: x^2 W and x^3 W^2 contain x^3 at level 2 but not x^2
    gens = [((2,), 1), ((3,), 2)]
    assert newton_membership((3,), gens, 2)[0]
    assert not newton_membership((2,), gens, 2)[0]


@pytest.mark.property
@given(st.data())
def test_membership_matches_scipy_and_certificates(data):
    k = data.draw(st.integers(1, 3))
    gens = [((data.draw(small), data.draw(small)), data.draw(st.integers(1, 3))) for _ in range(k)]
    assume(all(any(e) for e, _ in gens))
    point = (data.draw(small), data.draw(small))
    level = data.draw(st.integers(1, 3))
    inside, info = newton_membership(point, gens, level)
    assert inside == scipy_inside(point, gens, level)
    if inside:
        lam = info
        assert sum(lam) == 1 and all(v >= 0 for v in lam)
        for i in range(2):
            assert sum(l * Fraction(e[i], w) for l, (e, w) in zip(lam, gens)) <= Fraction(point[i], level)
    else:
        assert certificate_holds(info, point, gens, level)
