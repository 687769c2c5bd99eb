"""Exact multivariate polynomials over Q or F_p, plus ideals.

Polynomials are immutable: a :class:`RingSpec` plus a dict from exponent
tuples to nonzero coefficients (``int``/``Fraction`` in characteristic 0,
residues in ``[0, p)`` otherwise).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from maxmult import _kernel
from maxmult.errors import (
    NonInvertibleCoefficientError,
    ParseError,
    UnknownVariableError,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def binomial(n: int, k: int, p: int = 0) -> int:
    """C(n, k), reduced mod p via Lucas' theorem when p > 0."""
    if k < 0 or k > n:
        return 0
    if not p:
        return math.comb(n, k)
    out = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        out = out * math.comb(ni, ki) % p
        n //= p
        k //= p
    return out


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class RingSpec:
    characteristic: int
    variables: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        p = self.characteristic
        if p != 0 and not is_prime(p):
            raise ValueError(f"characteristic {p} is neither 0 nor prime")
        if p >= 2**62:
            raise ValueError("characteristic must fit a machine word")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        for v in self.variables:
            if not _NAME.match(v):
                raise ValueError(f"bad variable name {v!r}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def coerce(self, c):
        p = self.characteristic
        if p:
            if isinstance(c, Fraction):
                if c.denominator % p == 0:
                    raise NonInvertibleCoefficientError(
                        f"denominator {c.denominator} not invertible mod {p}")
                return c.numerator * pow(c.denominator, -1, p) % p
            return int(c) % p
        if isinstance(c, Fraction):
            return c.numerator if c.denominator == 1 else c
        return int(c)

    def inv(self, c):
        p = self.characteristic
        if p:
            return pow(c, -1, p)
        q = Fraction(1) / c
        return q.numerator if q.denominator == 1 else q

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.coerce(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self):
        return [self.var(v) for v in self.variables]

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        c = self.coerce(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def extend(self, names: Iterable[str], front: bool = False) -> "RingSpec":
        names = tuple(names)
        vs = names + self.variables if front else self.variables + names
        return RingSpec(self.characteristic, vs)

    def drop(self, names: Iterable[str]) -> "RingSpec":
        names = set(names)
        return RingSpec(self.characteristic,
                        tuple(v for v in self.variables if v not in names))

    def header(self) -> dict:
        return {"char": self.characteristic, "vars": list(self.variables)}

    def __str__(self):
        k = "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"
        return f"{k}[{','.join(self.variables)}]"


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping):
        # terms are trusted: nonzero, already coerced
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring: RingSpec, terms: Mapping) -> "Polynomial":
        out = {}
        n = ring.nvars
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong length for {ring}")
            c = ring.coerce(c)
            if c:
                out[e] = ring.coerce(out.get(e, 0) + c)
                if not out[e]:
                    del out[e]
        return cls(ring, out)

    # -- basic protocol -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __repr__(self):
        return f"Polynomial({self.to_text()!r}, {self.ring})"

    def __str__(self):
        return self.to_text()

    # -- arithmetic ------------------------------------------------------
    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _kernel.add_dicts(
            self.terms, other.terms, 1, self.ring.characteristic))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.characteristic
        if p:
            return Polynomial(self.ring, {e: (-c) % p for e, c in self.terms.items()})
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _kernel.add_dicts(
            self.terms, other.terms, -1, self.ring.characteristic))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _kernel.mul_dicts(
            self.terms, other.terms, self.ring.characteristic))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative int")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ring.coerce(c)
        if not c:
            return self.ring.zero()
        p = self.ring.characteristic
        if p:
            return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()})
        return Polynomial(self.ring, {e: self.ring.coerce(v * c)
                                      for e, v in self.terms.items()})

    def mul_monomial(self, exps, coeff=1) -> "Polynomial":
        m = self.ring.monomial(exps, coeff)
        return self * m

    # -- structure -------------------------------------------------------
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        i = self.ring.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def support(self) -> set:
        """Names of variables occurring in the polynomial."""
        used = set()
        for e in self.terms:
            for name, x in zip(self.ring.variables, e):
                if x:
                    used.add(name)
        return used

    def sorted_terms(self):
        """Terms in grevlex-descending order."""
        return sorted(self.terms.items(), key=lambda t: _grevlex_key(t[0]),
                      reverse=True)

    def leading_coefficient(self):
        if not self.terms:
            return 0
        return self.sorted_terms()[0][1]

    def monic(self) -> "Polynomial":
        """Scale so the grevlex-leading coefficient is 1."""
        if not self.terms:
            return self
        return self.scale(self.ring.inv(self.leading_coefficient()))

    def coefficient(self, exps) -> object:
        return self.terms.get(tuple(exps), 0)

    def homogeneous_part(self, d: int, varset=None) -> "Polynomial":
        """Terms of degree ``d`` in ``varset`` (all variables by default)."""
        idx = self._indices(varset)
        return Polynomial(self.ring, {e: c for e, c in self.terms.items()
                                      if sum(e[i] for i in idx) == d})

    def _indices(self, varset):
        if varset is None:
            return list(range(self.ring.nvars))
        return [self.ring.index(v) for v in varset]

    def coefficients_in(self, var: str) -> dict:
        """Map ``k -> coefficient of var^k`` (coefficients free of ``var``)."""
        i = self.ring.index(var)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            e0 = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[e0] = c
        return {k: Polynomial(self.ring, d) for k, d in out.items()}

    # -- maps --------------------------------------------------------------
    def subs(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials (in the target ring) for variables.

        Variables not in ``mapping`` must exist in the target ring under the
        same name.
        """
        if not mapping:
            return self
        target = next(iter(mapping.values())).ring
        images = []
        for name in self.ring.variables:
            if name in mapping:
                images.append(mapping[name])
            else:
                images.append(target.var(name))
        return self.compose(images, target)

    def compose(self, images: Sequence["Polynomial"], target: RingSpec) -> "Polynomial":
        cache = [dict() for _ in images]

        def power(i, k):
            if k not in cache[i]:
                cache[i][k] = images[i] ** k
            return cache[i][k]

        acc: dict = {}
        p = target.characteristic
        for e, c in self.terms.items():
            term = {(0,) * target.nvars: target.coerce(c)}
            for i, k in enumerate(e):
                if k:
                    term = _kernel.mul_dicts(term, power(i, k).terms, p)
                    if not term:
                        break
            acc = _kernel.add_dicts(acc, term, 1, p)
        return Polynomial(target, acc)

    def translate(self, shift: Mapping[str, object]) -> "Polynomial":
        """Substitute ``x -> x + a`` for each ``x: a`` in ``shift``."""
        shift = {v: a for v, a in shift.items() if self.ring.coerce(a)}
        if not shift:
            return self
        mapping = {v: self.ring.var(v) + self.ring.const(a) for v, a in shift.items()}
        return self.subs(mapping)

    def monomial_map(self, matrix_rows: Sequence[Sequence[int]], target: RingSpec) -> "Polynomial":
        """Apply a monomial substitution: new exponent = rows · e."""
        out: dict = {}
        p = target.characteristic
        for e, c in self.terms.items():
            ne = tuple(sum(r * x for r, x in zip(row, e)) for row in matrix_rows)
            out[ne] = out.get(ne, 0) + c
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Polynomial(target, out)

    def change_ring(self, target: RingSpec) -> "Polynomial":
        """Re-embed by variable name; every used variable must exist in target."""
        idx = []
        for name in self.ring.variables:
            idx.append(target.variables.index(name) if name in target.variables else None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * target.nvars
            for i, x in enumerate(e):
                if x:
                    if idx[i] is None:
                        raise ValueError(
                            f"variable {self.ring.variables[i]} not in {target}")
                    ne[idx[i]] = x
            out[tuple(ne)] = target.coerce(c)
        return Polynomial(target, {e: c for e, c in out.items() if c})

    def divide_by_var_power(self, var: str, k: int):
        """Exact division by ``var^k``; returns None if not divisible."""
        i = self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] < k:
                return None
            out[e[:i] + (e[i] - k,) + e[i + 1:]] = c
        return Polynomial(self.ring, out)

    def hasse(self, alpha: Sequence[int]) -> "Polynomial":
        return hasse_derivative(self, alpha)

    # -- text ----------------------------------------------------------------
    def to_text(self, labels: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = labels or self.ring.variables
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if x == 1 else f"{n}^{x}"
                            for n, x in zip(names, e) if x)
            neg = not self.ring.characteristic and c < 0
            a = -c if neg else c
            if not mono:
                body = _fmt_coeff(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_coeff(a)}*{mono}"
            if not pieces:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)


def hasse_derivative(f: Polynomial, alpha: Sequence[int]) -> Polynomial:
    """Divided-power derivative D_alpha(x^b) = C(b, alpha) x^(b - alpha)."""
    alpha = tuple(alpha)
    ring = f.ring
    if len(alpha) != ring.nvars:
        raise ValueError(f"alpha has length {len(alpha)}, ring has {ring.nvars} variables")
    if any(a < 0 for a in alpha):
        raise ValueError("alpha must be nonnegative")
    if not any(alpha):
        return f
    p = ring.characteristic
    out = {}
    for e, c in f.terms.items():
        if any(x < a for x, a in zip(e, alpha)):
            continue
        b = 1
        for x, a in zip(e, alpha):
            if a:
                b *= binomial(x, a, p)
                if p:
                    b %= p
                if not b:
                    break
        if b:
            v = c * b
            out[tuple(x - a for x, a in zip(e, alpha))] = v % p if p else v
    return Polynomial(ring, {e: c for e, c in out.items() if c})


def multi_indices(n: int, max_total: int, support: Sequence[int] | None = None):
    """All exponent vectors of length n with total <= max_total, restricted
    to the positions in ``support``."""
    positions = list(range(n)) if support is None else list(support)

    def rec(k, left):
        if k == len(positions):
            yield {}
            return
        for a in range(left + 1):
            for rest in rec(k + 1, left - a):
                if a:
                    rest = dict(rest)
                    rest[positions[k]] = a
                yield rest

    for d in rec(0, max_total):
        e = [0] * n
        for i, a in d.items():
            e[i] = a
        yield tuple(e)


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^]))")


def _tokenize(text: str):
    pos = 0
    out = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("var", m.group(2), start))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def parse_poly(text: str, ring: RingSpec) -> Polynomial:
    """Parse ``text`` in the term grammar (signed sums of coefficient*monomial)."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    toks = _tokenize(text)
    i = 0
    n = ring.nvars
    acc: dict = {}

    def peek():
        return toks[i]

    def expect_num():
        nonlocal i
        kind, val, pos = toks[i]
        if kind != "num":
            raise ParseError("expected a natural number", pos, text)
        i += 1
        return val

    first = True
    while True:
        kind, val, pos = peek()
        sign = 1
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        elif not first:
            if kind == "end":
                break
            raise ParseError(f"expected '+' or '-', got {val!r}", pos, text)
        elif kind == "end":
            raise ParseError("empty polynomial", pos, text)
        # term
        coeff = Fraction(sign)
        exps = [0] * n
        nfactors = 0
        while True:
            kind, val, pos = peek()
            if kind == "num":
                i += 1
                num = val
                if peek()[0] == "op" and peek()[1] == "/":
                    i += 1
                    den_pos = peek()[2]
                    den = expect_num()
                    if den == 0:
                        raise NonInvertibleCoefficientError("zero denominator", den_pos, text)
                    if ring.characteristic and den % ring.characteristic == 0:
                        raise NonInvertibleCoefficientError(
                            f"denominator {den} not invertible mod {ring.characteristic}",
                            den_pos, text)
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif kind == "var":
                i += 1
                if val not in ring.variables:
                    raise UnknownVariableError(f"unknown variable {val!r}", pos, text)
                k = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    i += 1
                    k = expect_num()
                exps[ring.variables.index(val)] += k
            else:
                raise ParseError(f"expected a coefficient or variable, got {val!r}", pos, text)
            nfactors += 1
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                i += 1
                continue
            if kind in ("num", "var"):
                continue  # juxtaposition
            break
        e = tuple(exps)
        acc[e] = acc.get(e, 0) + coeff
        first = False
        kind, val, pos = peek()
        if kind == "end":
            break
    return Polynomial.from_terms(ring, acc)


# -- ideals ------------------------------------------------------------------

class Ideal:
    """An ideal given by generators; zero generators are dropped."""

    __slots__ = ("ring", "generators")

    def __init__(self, ring: RingSpec, generators: Iterable[Polynomial] = ()):
        gens = []
        seen = set()
        for g in generators:
            if g.ring != ring:
                raise ValueError(f"generator ring {g.ring} differs from {ring}")
            if g and g not in seen:
                seen.add(g)
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)

    @classmethod
    def parse(cls, ring: RingSpec, texts: Iterable[str]) -> "Ideal":
        return cls(ring, [parse_poly(t, ring) for t in texts])

    def __repr__(self):
        return f"Ideal({self.to_text()}, {self.ring})"

    def __eq__(self, other):
        return (isinstance(other, Ideal) and self.ring == other.ring
                and self.generators == other.generators)

    def __hash__(self):
        return hash((self.ring, self.generators))

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])

    def __pow__(self, n: int) -> "Ideal":
        if n == 0:
            return Ideal(self.ring, [self.ring.one()])
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def to_text(self, labels=None) -> str:
        return "⟨" + ", ".join(g.to_text(labels) for g in self.generators) + "⟩"

    def texts(self) -> list:
        return [g.to_text() for g in self.generators]
