"""Pure-Python hot kernels for polynomial arithmetic and reduction.

Two term layouts are used:

* dict layout ``{exponent_tuple: coeff}`` for public polynomial arithmetic;
* sorted layout ``[(key, coeff), ...]`` with keys strictly descending, where
  ``key`` is a linear encoding of the exponent vector under a monomial order
  (see ``maxmult.groebner``).  Because the encoding is linear, multiplying by
  a monomial is a componentwise key shift and preserves the ordering.

``p == 0`` means rational coefficients (int/Fraction); otherwise residues mod p.
The compiled twin ``_ckernels.pyx`` must stay behaviourally identical.
"""


def mul_dicts(a, b, p):
    out = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple([x + y for x, y in zip(ea, eb)])
            out[e] = get(e, 0) + ca * cb
    if p:
        return {e: c % p for e, c in out.items() if c % p}
    return {e: c for e, c in out.items() if c}


def add_dicts(a, b, scale, p):
    """Return ``a + scale*b``."""
    out = dict(a)
    get = out.get
    for e, c in b.items():
        out[e] = get(e, 0) + scale * c
    if p:
        return {e: c % p for e, c in out.items() if c % p}
    return {e: c for e, c in out.items() if c}


def divides(a, b, sgn):
    """Monomial ``a`` divides ``b`` (both encoded keys)."""
    for s, x, y in zip(sgn, a, b):
        if s > 0:
            if x > y:
                return False
        elif s < 0:
            if x < y:
                return False
    return True


def sub_mul(f, start, g, c, shift, p):
    """Merge ``f[start:]`` with ``-c * shift * g[1:]``.

    Used after the leading term ``f[start-1]`` has been cancelled by the
    leading term of monic ``g``.
    """
    out = []
    append = out.append
    i = start
    nf = len(f)
    j = 1
    ng = len(g)
    if j < ng:
        gk, gc = g[j]
        gk = tuple([u + v for u, v in zip(gk, shift)])
    while i < nf and j < ng:
        fk, fc = f[i]
        if fk > gk:
            append(f[i])
            i += 1
        elif fk < gk:
            v = -c * gc
            if p:
                v %= p
            append((gk, v))
            j += 1
            if j < ng:
                gk, gc = g[j]
                gk = tuple([u + v for u, v in zip(gk, shift)])
        else:
            v = fc - c * gc
            if p:
                v %= p
            if v:
                append((fk, v))
            i += 1
            j += 1
            if j < ng:
                gk, gc = g[j]
                gk = tuple([u + v for u, v in zip(gk, shift)])
    while i < nf:
        append(f[i])
        i += 1
    while j < ng:
        v = -c * gc
        if p:
            v %= p
        append((gk, v))
        j += 1
        if j < ng:
            gk, gc = g[j]
            gk = tuple([u + v for u, v in zip(gk, shift)])
    return out


def normal_form(f, basis, p, sgn, limit=None):
    """Fully reduce sorted-layout ``f`` by monic sorted-layout ``basis``.

    Returns ``(remainder, steps)``; the remainder is ``None`` when more than
    ``limit`` reduction steps would be needed.
    """
    rem = []
    steps = 0
    i = 0
    while i < len(f):
        k, c = f[i]
        for g in basis:
            gk = g[0][0]
            if divides(gk, k, sgn):
                shift = tuple([x - y for x, y in zip(k, gk)])
                f = sub_mul(f, i + 1, g, c, shift, p)
                i = 0
                steps += 1
                if limit is not None and steps > limit:
                    return None, steps
                break
        else:
            rem.append(f[i])
            i += 1
    return rem, steps
