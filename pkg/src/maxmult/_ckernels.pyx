# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``; same layouts, same results.

For a prime characteristic below 2**31 the coefficient arithmetic runs on
C ``long long`` values, so products of two residues cannot overflow.
"""

cdef long long _SMALL = 2147483648


cdef inline tuple _shifted(tuple key, tuple shift):
    cdef Py_ssize_t n = len(key), t
    out = [None] * n
    for t in range(n):
        out[t] = <long long>key[t] + <long long>shift[t]
    return tuple(out)


def mul_dicts(dict a, dict b, p):
    cdef dict out = {}
    cdef tuple ea, eb, e
    cdef Py_ssize_t n, t
    cdef long long pp, ca_l, acc
    if p and p < _SMALL:
        pp = p
        for ea, ca in a.items():
            ca_l = ca
            n = len(ea)
            for eb, cb in b.items():
                e = tuple([<long long>ea[t] + <long long>eb[t] for t in range(n)])
                acc = out.get(e, 0)
                out[e] = (acc + ca_l * <long long>cb) % pp
        return {e: c for e, c in out.items() if c}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple([x + y for x, y in zip(ea, eb)])
            out[e] = out.get(e, 0) + ca * cb
    if p:
        return {e: c % p for e, c in out.items() if c % p}
    return {e: c for e, c in out.items() if c}


def add_dicts(dict a, dict b, scale, p):
    """Return ``a + scale*b``."""
    cdef dict out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + scale * c
    if p:
        return {e: c % p for e, c in out.items() if c % p}
    return {e: c for e, c in out.items() if c}


cpdef bint divides(tuple a, tuple b, tuple sgn):
    """Monomial ``a`` divides ``b`` (both encoded keys)."""
    cdef Py_ssize_t t, n = len(sgn)
    cdef long s
    for t in range(n):
        s = sgn[t]
        if s > 0:
            if <long long>a[t] > <long long>b[t]:
                return False
        elif s < 0:
            if <long long>a[t] < <long long>b[t]:
                return False
    return True


cdef list _sub_mul_small(list f, Py_ssize_t start, list g, long long c, tuple shift, long long p):
    cdef list out = []
    cdef Py_ssize_t i = start, j = 1, nf = len(f), ng = len(g)
    cdef long long v, gc = 0
    cdef tuple gk = None, fk
    if j < ng:
        gk = _shifted(g[j][0], shift)
        gc = g[j][1]
    while i < nf and j < ng:
        fk = f[i][0]
        if fk > gk:
            out.append(f[i])
            i += 1
        elif fk < gk:
            v = (p - (c * gc) % p) % p
            out.append((gk, v))
            j += 1
            if j < ng:
                gk = _shifted(g[j][0], shift)
                gc = g[j][1]
        else:
            v = (<long long>f[i][1] - (c * gc) % p) % p
            if v < 0:
                v += p
            if v:
                out.append((fk, v))
            i += 1
            j += 1
            if j < ng:
                gk = _shifted(g[j][0], shift)
                gc = g[j][1]
    while i < nf:
        out.append(f[i])
        i += 1
    while j < ng:
        v = (p - (c * gc) % p) % p
        out.append((gk, v))
        j += 1
        if j < ng:
            gk = _shifted(g[j][0], shift)
            gc = g[j][1]
    return out


cdef list _sub_mul_obj(list f, Py_ssize_t start, list g, c, tuple shift, p):
    cdef list out = []
    cdef Py_ssize_t i = start, j = 1, nf = len(f), ng = len(g)
    cdef tuple gk = None, fk
    gc = None
    if j < ng:
        gk = _shifted(g[j][0], shift)
        gc = g[j][1]
    while i < nf and j < ng:
        fk = f[i][0]
        if fk > gk:
            out.append(f[i])
            i += 1
        elif fk < gk:
            v = -c * gc
            if p:
                v %= p
            out.append((gk, v))
            j += 1
            if j < ng:
                gk = _shifted(g[j][0], shift)
                gc = g[j][1]
        else:
            v = f[i][1] - c * gc
            if p:
                v %= p
            if v:
                out.append((fk, v))
            i += 1
            j += 1
            if j < ng:
                gk = _shifted(g[j][0], shift)
                gc = g[j][1]
    while i < nf:
        out.append(f[i])
        i += 1
    while j < ng:
        v = -c * gc
        if p:
            v %= p
        out.append((gk, v))
        j += 1
        if j < ng:
            gk = _shifted(g[j][0], shift)
            gc = g[j][1]
    return out


def sub_mul(f, start, g, c, shift, p):
    """Merge ``f[start:]`` with ``-c * shift * g[1:]``."""
    f = list(f)
    g = list(g)
    shift = tuple(shift)
    if p and p < _SMALL:
        return _sub_mul_small(f, start, g, c % p, shift, p)
    return _sub_mul_obj(f, start, g, c, shift, p)


def normal_form(f, basis, p, tuple sgn, limit=None):
    """Fully reduce sorted-layout ``f`` by monic sorted-layout ``basis``.

    Returns ``(remainder, steps)``; the remainder is ``None`` when more than
    ``limit`` reduction steps would be needed.
    """
    cdef list rem = []
    cdef list cur = list(f)
    cdef list bl = [list(g) for g in basis]
    cdef list lead = [g[0][0] for g in bl]
    cdef Py_ssize_t i = 0, b, nb = len(bl), t, n
    cdef long steps = 0
    cdef long cap = -1 if limit is None else limit
    cdef bint small = bool(p) and p < _SMALL
    cdef tuple k, gk, shift
    cdef bint hit
    while i < len(cur):
        k = cur[i][0]
        c = cur[i][1]
        hit = False
        for b in range(nb):
            gk = lead[b]
            if divides(gk, k, sgn):
                n = len(k)
                shift = tuple([<long long>k[t] - <long long>gk[t] for t in range(n)])
                if small:
                    cur = _sub_mul_small(cur, i + 1, bl[b], c, shift, p)
                else:
                    cur = _sub_mul_obj(cur, i + 1, bl[b], c, shift, p)
                i = 0
                steps += 1
                if cap >= 0 and steps > cap:
                    return None, steps
                hit = True
                break
        if not hit:
            rem.append(cur[i])
            i += 1
    return rem, steps
