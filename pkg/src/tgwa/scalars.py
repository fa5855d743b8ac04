"""Exact scalars.

A :class:`Scalar` is an element of Frac(Q(e)[x_1, ..., x_m]) where ``e`` is a
primitive N-th root of unity and the x_i are named transcendental
parameters (``q1``, ``l12``, ``lam``, ``rho``, ...).  Scalars are kept in a
canonical form: numerator and denominator coprime, monomial content removed,
and the denominator's leading coefficient (graded lexicographic order,
variables compared alphabetically) equal to 1.  Equality is equality of
canonical forms.

Cyclotomic numbers are coordinate vectors in the power basis
1, e, ..., e^(phi(N)-1).  Numbers built for different N are lifted to the
least common multiple on contact, so plain rationals (N = 1) mix freely with
elements of any cyclotomic field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import (DenominatorVanishes, DivisionByZero, QEqualsOne,
                     ZeroInput)

# ---------------------------------------------------------------------------
# cyclotomic numbers


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _int_poly_divexact(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant first."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _int_poly_divexact(p, cyclotomic_polynomial(d))
    return tuple(p)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def _power_table(n: int):
    """Coordinates of e^k, k = 0..n-1, in the power basis mod Phi_n."""
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    v = [1] + [0] * (deg - 1)
    table = []
    for _ in range(n):
        table.append(tuple(v))
        top = v[-1]
        v = [0] + v[:-1]
        if top:
            for i in range(deg):
                v[i] -= top * phi_poly[i]
    return tuple(table)


@lru_cache(maxsize=None)
def _trace_weights(n: int):
    # normalized trace of e^k is mu(n/g)/phi(n/g), g = gcd(n, k); it does not
    # change when the number is lifted to a larger cyclotomic field
    out = []
    for k in range(euler_phi(n)):
        m = n // gcd(n, k)
        out.append(Fraction(_mobius(m), euler_phi(m)))
    return tuple(out)


def _reduce_dense(dense, n):
    table = _power_table(n)
    out = [Fraction(0)] * euler_phi(n)
    for k, c in enumerate(dense):
        if c:
            for i, t in enumerate(table[k]):
                if t:
                    out[i] += c * t
    return tuple(out)


class CyclotomicRational:
    """Element of Q(e_N) stored in the power basis modulo Phi_N."""

    __slots__ = ("N", "coeffs")

    def __init__(self, coeffs: Iterable, N: int = 1):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(N):
            raise ValueError("expected %d coordinates for N=%d" % (euler_phi(N), N))
        self.N = N
        self.coeffs = coeffs

    @classmethod
    def rational(cls, r) -> "CyclotomicRational":
        return cls((Fraction(r),), 1)

    @classmethod
    def root_power(cls, k: int, N: int) -> "CyclotomicRational":
        """The number e_N^k."""
        return cls(_power_table(N)[k % N], N)

    def lift(self, M: int) -> "CyclotomicRational":
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError("cannot lift from N=%d to N=%d" % (self.N, M))
        step = M // self.N
        dense = [Fraction(0)] * M
        for k, c in enumerate(self.coeffs):
            dense[k * step] = c
        return CyclotomicRational(_reduce_dense(dense, M), M)

    def _common(self, other):
        if self.N == other.N:
            return self, other, self.N
        M = _lcm(self.N, other.N)
        return self.lift(M), other.lift(M), M

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __add__(self, other):
        a, b, n = self._common(other)
        return CyclotomicRational(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), n)

    def __sub__(self, other):
        a, b, n = self._common(other)
        return CyclotomicRational(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)), n)

    def __neg__(self):
        return CyclotomicRational(tuple(-x for x in self.coeffs), self.N)

    def __mul__(self, other):
        if self.N == 1 and other.N == 1:
            return CyclotomicRational((self.coeffs[0] * other.coeffs[0],), 1)
        if other.N == 1:
            c = other.coeffs[0]
            return CyclotomicRational(tuple(x * c for x in self.coeffs), self.N)
        if self.N == 1:
            c = self.coeffs[0]
            return CyclotomicRational(tuple(x * c for x in other.coeffs), other.N)
        a, b, n = self._common(other)
        dense = [Fraction(0)] * n
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        dense[(i + j) % n] += x * y
        return CyclotomicRational(_reduce_dense(dense, n), n)

    def conjugate(self, k: int) -> "CyclotomicRational":
        """Image under the Galois automorphism e -> e^k (gcd(k, N) = 1)."""
        n = self.N
        dense = [Fraction(0)] * n
        for i, x in enumerate(self.coeffs):
            if x:
                dense[(i * k) % n] += x
        return CyclotomicRational(_reduce_dense(dense, n), n)

    def inverse(self) -> "CyclotomicRational":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return CyclotomicRational((1 / self.coeffs[0],) + self.coeffs[1:], self.N)
        # x^-1 = (product of the other conjugates) / norm(x)
        others = CyclotomicRational.rational(1)
        for k in range(2, self.N):
            if gcd(k, self.N) == 1:
                others = others * self.conjugate(k)
        norm = (self * others).coeffs[0]
        return CyclotomicRational(tuple(c / norm for c in others.coeffs), self.N)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicRational.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, CyclotomicRational):
            return NotImplemented
        a, b, _ = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(sum(c * w for c, w in zip(self.coeffs, _trace_weights(self.N))))

    def __repr__(self):
        return "CyclotomicRational(%r, N=%d)" % ([str(c) for c in self.coeffs], self.N)


_CZERO = CyclotomicRational.rational(0)
_CONE = CyclotomicRational.rational(1)

# ---------------------------------------------------------------------------
# monomials: sorted tuples of (name, positive exponent)

Mono = Tuple[Tuple[str, int], ...]


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: Mono, b: Mono) -> Optional[Mono]:
    d = dict(a)
    for v, e in b:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def _mono_gcd(a: Mono, b: Mono) -> Mono:
    db = dict(b)
    return tuple((v, min(e, db[v])) for v, e in a if v in db)


def _mono_deg(a: Mono) -> int:
    return sum(e for _, e in a)


class Poly:
    """Multivariate polynomial with cyclotomic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Mono, CyclotomicRational]] = None):
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def const(cls, c: CyclotomicRational) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): _CONE})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> CyclotomicRational:
        return self.terms.get((), _CZERO)

    def variables(self):
        return {v for m in self.terms for v, _ in m}

    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return Poly(t)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        t: Dict[Mono, CyclotomicRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                t[m] = t[m] + c if m in t else c
        return Poly(t)

    def scale(self, c: CyclotomicRational) -> "Poly":
        return Poly({m: x * c for m, x in self.terms.items()})

    def mul_mono(self, mono: Mono) -> "Poly":
        return Poly({_mono_mul(m, mono): c for m, c in self.terms.items()})

    def div_mono(self, mono: Mono) -> "Poly":
        return Poly({_mono_div(m, mono): c for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        result = Poly.const(_CONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self):
        """Terms in decreasing graded lexicographic order."""
        names = sorted(self.variables())

        def key(item):
            d = dict(item[0])
            return (_mono_deg(item[0]), tuple(d.get(v, 0) for v in names))

        return sorted(self.terms.items(), key=key, reverse=True)

    def leading(self):
        names = sorted(self.variables())

        def key(item):
            d = dict(item[0])
            return (_mono_deg(item[0]), tuple(d.get(v, 0) for v in names))

        return max(self.terms.items(), key=key)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.leading()[1].inverse())

    def mono_content(self) -> Mono:
        it = iter(self.terms)
        g = next(it)
        for m in it:
            if not g:
                break
            g = _mono_gcd(g, m)
        return g

    def degree_in(self, x: str) -> int:
        return max((dict(m).get(x, 0) for m in self.terms), default=0)

    def coeffs_in(self, x: str) -> Dict[int, "Poly"]:
        out: Dict[int, Dict[Mono, CyclotomicRational]] = {}
        for m, c in self.terms.items():
            d = dict(m)
            k = d.pop(x, 0)
            out.setdefault(k, {})[tuple(sorted(d.items()))] = c
        return {k: Poly(t) for k, t in out.items()}

    def coeff_in(self, x: str, k: int) -> "Poly":
        t = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(x, 0) == k:
                d.pop(x, None)
                t[tuple(sorted(d.items()))] = c
        return Poly(t)


_PZERO = Poly()
_PONE = Poly.const(_CONE)


def poly_divexact(a: Poly, b: Poly) -> Optional[Poly]:
    """Return a/b if b divides a exactly, else None."""
    if b.is_zero():
        raise DivisionByZero("polynomial division by zero")
    lm, lc = b.leading()
    lc_inv = lc.inverse()
    q: Dict[Mono, CyclotomicRational] = {}
    r = a
    while not r.is_zero():
        m, c = r.leading()
        t = _mono_div(m, lm)
        if t is None:
            return None
        coef = c * lc_inv
        q[t] = coef
        r = r - Poly({t: coef}) * b
    return Poly(q)


def _prem(a: Poly, b: Poly, x: str) -> Poly:
    db = b.degree_in(x)
    lb = b.coeff_in(x, db)
    r = a
    while not r.is_zero():
        dr = r.degree_in(x)
        if dr < db:
            break
        lr = r.coeff_in(x, dr)
        shift = ((x, dr - db),) if dr > db else ()
        r = lb * r - (lr * b).mul_mono(shift)
    return r


def _content_in(a: Poly, x: str) -> Poly:
    g = None
    for c in a.coeffs_in(x).values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            return _PONE
    return g


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor, normalized to leading coefficient 1."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return _PONE
    ma, mb = a.mono_content(), b.mono_content()
    gm = _mono_gcd(ma, mb)
    a, b = a.div_mono(ma), b.div_mono(mb)
    if a.is_constant() or b.is_constant():
        return Poly({gm: _CONE})
    x = sorted(a.variables() | b.variables())[0]
    da, db = a.degree_in(x), b.degree_in(x)
    ca = _content_in(a, x) if da else a
    cb = _content_in(b, x) if db else b
    g = poly_gcd(ca, cb)
    if da and db:
        pa, pb = poly_divexact(a, ca), poly_divexact(b, cb)
        if pa.degree_in(x) < pb.degree_in(x):
            pa, pb = pb, pa
        while True:
            r = _prem(pa, pb, x)
            if r.is_zero():
                g = g * pb
                break
            if r.degree_in(x) == 0:
                break
            pa, pb = pb, poly_divexact(r, _content_in(r, x))
    return g.mul_mono(gm).monic()


# ---------------------------------------------------------------------------
# scalars


def _canonical(num: Poly, den: Poly):
    if den.is_zero():
        raise DivisionByZero("division by zero")
    if num.is_zero():
        return _PZERO, _PONE
    mn, md = num.mono_content(), den.mono_content()
    common = _mono_gcd(mn, md)
    if common:
        num, den = num.div_mono(common), den.div_mono(common)
    if not den.is_constant() and len(num.terms) > 1 and len(den.terms) > 1:
        g = poly_gcd(num, den)
        if not g.is_constant():
            num, den = poly_divexact(num, g), poly_divexact(den, g)
    lc_inv = den.leading()[1].inverse()
    if not lc_inv.is_one():
        num, den = num.scale(lc_inv), den.scale(lc_inv)
    return num, den


class Scalar:
    """Canonical fraction of cyclotomic polynomials in named parameters."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.num, self.den = value.num, value.den
        elif isinstance(value, CyclotomicRational):
            self.num, self.den = Poly.const(value), _PONE
        elif isinstance(value, (int, Fraction)):
            self.num, self.den = Poly.const(CyclotomicRational.rational(value)), _PONE
        elif isinstance(value, str):
            s = parse_scalar(value)
            self.num, self.den = s.num, s.den
        else:
            raise TypeError("cannot make a Scalar from %r" % (value,))
        self._hash = None

    @classmethod
    def from_parts(cls, num: Poly, den: Poly, reduced: bool = False) -> "Scalar":
        s = cls.__new__(cls)
        if not reduced:
            num, den = _canonical(num, den)
        s.num, s.den, s._hash = num, den, None
        return s

    @classmethod
    def param(cls, name: str) -> "Scalar":
        return cls.from_parts(Poly.var(name), _PONE, reduced=True)

    @classmethod
    def eps(cls, k: int = 1, N: int = 1) -> "Scalar":
        """The root of unity e_N^k."""
        return cls(CyclotomicRational.root_power(k, N))

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_constant() and self.num.is_constant() and self.num.constant_value().is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> CyclotomicRational:
        if not self.is_constant():
            raise ValueError("scalar depends on parameters")
        return self.num.constant_value()

    def variables(self):
        return self.num.variables() | self.den.variables()

    def monomial_form(self):
        """Return (c, exps) if self = c * prod(name^exp) with c a cyclotomic
        constant and integer exponents, else None."""
        if len(self.num.terms) != 1 or len(self.den.terms) != 1:
            return None
        (mn, c), = self.num.terms.items()
        (md, d), = self.den.terms.items()
        exps = dict(mn)
        for v, e in md:
            exps[v] = exps.get(v, 0) - e
        return c / d, exps

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = as_scalar(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return Scalar.from_parts(self.num + other.num, self.den)
        return Scalar.from_parts(self.num * other.den + other.num * self.den,
                                 self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar.from_parts(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-as_scalar(other))

    def __rsub__(self, other):
        return as_scalar(other) + (-self)

    def __mul__(self, other):
        other = as_scalar(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        if other.is_constant() and other.den.is_constant():
            c = other.constant_value()
            if c.is_one():
                return self
            return Scalar.from_parts(self.num.scale(c), self.den, reduced=True)
        if self.is_constant():
            return other * self
        return Scalar.from_parts(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return Scalar.from_parts(self.den, self.num)

    def __truediv__(self, other):
        other = as_scalar(other)
        if other.is_zero():
            raise DivisionByZero("division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            raise TypeError("integer exponents only")
        if k == 0:
            return ONE
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_zero():
            return ZERO
        # coprime numerator and denominator stay coprime under powers
        num, den = self.num ** k, self.den ** k
        lc_inv = den.leading()[1].inverse()
        return Scalar.from_parts(num.scale(lc_inv), den.scale(lc_inv), reduced=True)

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return "Scalar(%r)" % format_scalar(self)


def as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


ZERO = Scalar(0)
ONE = Scalar(1)


def param(name: str) -> Scalar:
    return Scalar.param(name)


def eps(k: int = 1, N: int = 1) -> Scalar:
    return Scalar.eps(k, N)


# ---------------------------------------------------------------------------
# operations


def field_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Apply ``op`` in {add, sub, mul, div} to two scalars."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if as_scalar(b).is_zero():
            raise DivisionByZero("division by zero")
        return a / b
    raise ValueError("unknown operation %r" % op)


def q_integer(k: int, q) -> Scalar:
    """[k]_q = (q^k - 1)/(q - 1) for any integer k."""
    q = as_scalar(q)
    if q.is_one():
        raise QEqualsOne("[k]_q is undefined at q = 1")
    if k >= 0:
        total, power = ZERO, ONE
        for _ in range(k):
            total = total + power
            power = power * q
        return total
    return (q ** k - 1) / (q - 1)


def root_of_unity_order(s) -> Optional[int]:
    """Least d > 0 with s^d = 1, or None when s is not of the form +-e^k."""
    s = as_scalar(s)
    if s.is_zero():
        raise ZeroInput("zero is not a unit")
    if not s.is_constant():
        return None
    c = s.constant_value() / s.den.constant_value()
    period = _lcm(2, c.N)
    if not (c ** period).is_one():
        return None
    for d in range(1, period + 1):
        if period % d == 0 and (c ** d).is_one():
            return d
    return None  # pragma: no cover


def _eval_poly(p: Poly, values: Mapping[str, Scalar]):
    """Evaluate p at the given values; returns (numerator, denominator) polys."""
    maxdeg: Dict[str, int] = {}
    for m in p.terms:
        for v, e in m:
            if v in values:
                maxdeg[v] = max(maxdeg.get(v, 0), e)
    cache: Dict[Tuple[str, int, str], Poly] = {}

    def power(v, k, part):
        key = (v, k, part)
        if key not in cache:
            base = values[v].num if part == "n" else values[v].den
            cache[key] = base ** k
        return cache[key]

    total = _PZERO
    for m, c in p.terms.items():
        term = Poly({(): c})
        rest = []
        exps = dict(m)
        for v, e in m:
            if v not in values:
                rest.append((v, e))
        for v, k in maxdeg.items():
            e = exps.get(v, 0)
            if e:
                term = term * power(v, e, "n")
            if k > e:
                term = term * power(v, k - e, "d")
        total = total + term.mul_mono(tuple(rest))
    den = _PONE
    for v, k in maxdeg.items():
        den = den * power(v, k, "d")
    return total, den


def substitute(s, assignment: Mapping[str, object]) -> Scalar:
    """Substitute scalars for parameters."""
    s = as_scalar(s)
    values = {k: as_scalar(v) for k, v in assignment.items() if k in s.variables()}
    if not values:
        return s
    dn, dd = _eval_poly(s.den, values)
    if dn.is_zero():
        raise DenominatorVanishes("denominator %s vanishes" % format_poly(s.den))
    nn, nd = _eval_poly(s.num, values)
    return Scalar.from_parts(nn * dd, nd * dn)


# ---------------------------------------------------------------------------
# canonical strings


def _format_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else "%d/%d" % (r.numerator, r.denominator)


def format_poly(p: Poly, N: Optional[int] = None) -> str:
    if p.is_zero():
        return "0"
    if N is None:
        N = 1
        for c in p.terms.values():
            N = _lcm(N, c.N)
    pieces = []
    for m, c in p.sorted_terms():
        c = c.lift(_lcm(N, c.N))
        for k, r in enumerate(c.coeffs):
            if not r:
                continue
            factors = []
            if k == 1:
                factors.append("e")
            elif k > 1:
                factors.append("e^%d" % k)
            factors += [v if e == 1 else "%s^%d" % (v, e) for v, e in m]
            mag = abs(r)
            if factors:
                body = "*".join(([_format_rational(mag)] if mag != 1 else []) + factors)
            else:
                body = _format_rational(mag)
            pieces.append(("-" if r < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += " %s %s" % (sign, body)
    return out


def format_scalar(s: Scalar, N: Optional[int] = None) -> str:
    """Canonical string of a scalar; ``e`` denotes the primitive N-th root."""
    num = format_poly(s.num, N)
    if s.den.is_constant() and s.den.constant_value().is_one():
        return num
    den = format_poly(s.den, N)
    if " " in num:
        num = "(" + num + ")"
    if " " in den or "*" in den or "/" in den:
        den = "(" + den + ")"
    return "%s/%s" % (num, den)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1):
            out.append(("int", int(m.group(1))))
        elif m.group(2):
            out.append(("name", m.group(2)))
        else:
            ch = m.group(3)
            if ch not in "^*/+-()":
                raise ValueError("unexpected character %r in %r" % (ch, text))
            out.append(("op", ch))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, N: int, names: Optional[Mapping[str, Scalar]]):
        self.toks = _tokenize(text)
        self.i = 0
        self.N = N
        self.names = names or {}
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise ValueError("expected %r in %r" % (op, self.text))
        self.i += 1
        return tok

    def parse(self) -> Scalar:
        if not self.toks:
            raise ValueError("empty scalar expression")
        val = self.expr()
        if self.i != len(self.toks):
            raise ValueError("trailing input in %r" % self.text)
        return val

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            val = val * rhs if op == "*" else val / rhs
        return val

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        base = self.base()
        if self.peek() == ("op", "^"):
            self.take()
            base = base ** self.exponent()
        return base

    def exponent(self):
        sign = 1
        paren = self.peek() == ("op", "(")
        if paren:
            self.take()
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        kind, val = self.take()
        if kind != "int":
            raise ValueError("integer exponent expected in %r" % self.text)
        if paren:
            self.take(")")
        return sign * val

    def base(self):
        kind, val = self.take()
        if kind == "int":
            return Scalar(val)
        if kind == "name":
            if val in self.names:
                return self.names[val]
            if val == "e":
                return Scalar.eps(1, self.N)
            return Scalar.param(val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.take(")")
            return inner
        raise ValueError("unexpected token %r in %r" % (val, self.text))


def parse_scalar(text: str, N: int = 1, names: Optional[Mapping[str, Scalar]] = None) -> Scalar:
    """Parse the canonical string grammar; ``e`` is the primitive N-th root."""
    return _Parser(str(text), N, names).parse()


# ---------------------------------------------------------------------------
# parameter environments


class ParameterEnv:
    """Cyclotomic order plus bindings of algebra parameters.

    Unbound names are transcendental.  Bound values must be unit monomials:
    +-e^k times a monomial in unbound parameters.  Quantized Weyl algebra
    parameters are named ``q1, q2, ...`` and ``l12, l13, ...`` (the
    lambda_ij with i < j; lambda_ji is the inverse).
    """

    def __init__(self, N: int = 1, bindings: Optional[Mapping[str, object]] = None):
        self.N = N
        self.bindings: Dict[str, Scalar] = {}
        for name, value in (bindings or {}).items():
            if isinstance(value, str):
                value = parse_scalar(value, N)
            value = as_scalar(value)
            form = value.monomial_form()
            if form is None:
                raise ValueError("binding %s = %s is not a unit monomial" % (name, value))
            if root_of_unity_order(Scalar(form[0])) is None:
                raise ValueError("binding %s has a non-root-of-unity coefficient" % name)
            if name in form[1]:
                raise ValueError("binding %s refers to itself" % name)
            self.bindings[name] = value
        for name, value in self.bindings.items():
            if set(value.variables()) & set(self.bindings):
                raise ValueError("binding %s refers to a bound parameter" % name)

    def value(self, name: str) -> Scalar:
        if name in self.bindings:
            return self.bindings[name]
        return Scalar.param(name)

    def q(self, i: int) -> Scalar:
        return self.value("q%d" % i)

    def lam(self, i: int, j: int) -> Scalar:
        if i == j:
            return ONE
        if i < j:
            return self.value("l%d%d" % (i, j))
        return self.value("l%d%d" % (j, i)).inverse()

    def qwa_mu(self, n: int):
        """mu_ij = lambda_ji and mu_ji = q_i lambda_ij for i < j."""
        mu = [[ONE] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                mu[i][j] = self.lam(j + 1, i + 1)
                mu[j][i] = self.q(i + 1) * self.lam(i + 1, j + 1)
        return mu

    def eps(self, k: int = 1) -> Scalar:
        return Scalar.eps(k, self.N)

    def parse(self, text: str) -> Scalar:
        return parse_scalar(text, self.N)

    def fmt(self, s: Scalar) -> str:
        return format_scalar(s, self.N)

    def __repr__(self):
        return "ParameterEnv(N=%d, %s)" % (
            self.N, {k: format_scalar(v, self.N) for k, v in self.bindings.items()})
