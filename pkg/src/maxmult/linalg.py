"""Exact Gaussian elimination over Q or F_p (coefficients coerced by a RingSpec)."""

from __future__ import annotations

from maxmult.ring import RingSpec


def solve(columns: list, target: dict, ring: RingSpec):
    """Find c with sum_j c_j * columns[j] == target, or None.

    ``columns`` and ``target`` are sparse vectors ``{row_key: value}``.
    Free variables are set to zero; the result is a list of coefficients.
    """
    keys = sorted({k for col in columns for k in col} | set(target))
    ncols = len(columns)
    rows = []
    for k in keys:
        row = [0] * (ncols + 1)
        for j, col in enumerate(columns):
            v = col.get(k)
            if v:
                row[j] = ring.coerce(v)
        row[ncols] = ring.coerce(target.get(k, 0))
        rows.append(row)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = [ring.coerce(x * inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [ring.coerce(a - f * b) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][ncols]:
            return None
    sol = [ring.coerce(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][ncols]
    return sol
