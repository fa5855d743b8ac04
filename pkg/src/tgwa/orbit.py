"""Weight points of quantized Weyl algebras and the Z^n action on them.

A weight point is the maximal ideal m = (t_1 - a_1, ..., t_n - a_n), stored as
the vector a.  Everything here is specific to the quantized Weyl algebra
automorphisms sigma_i, whose action on points has a closed form in terms of
q-integers and the partial sums gamma_j = 1 + sum_{r <= j} (q_r - 1) a_r.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import GroupnessViolated
from .lattice import Lattice, full_lattice, hnf, intersect, kernel_of_unit_map
from .scalars import (ONE, ZERO, ParameterEnv, Scalar, as_scalar, format_scalar,
                      parse_scalar, q_integer, root_of_unity_order)


@dataclass(frozen=True)
class WeightPoint:
    alpha: Tuple[Scalar, ...]
    label: str = ""

    @property
    def n(self) -> int:
        return len(self.alpha)

    def to_json(self, N: Optional[int] = None):
        return [format_scalar(a, N) for a in self.alpha]

    def __eq__(self, other):
        return isinstance(other, WeightPoint) and self.alpha == other.alpha

    def __hash__(self):
        return hash(self.alpha)

    def __str__(self):
        return "(" + ", ".join("t%d - (%s)" % (i + 1, a) for i, a in enumerate(self.alpha)) + ")"


def point(*alpha, label: str = "") -> WeightPoint:
    return WeightPoint(tuple(as_scalar(a) for a in alpha), label)


def n0_point(env: ParameterEnv, n: int = 2) -> WeightPoint:
    """(t_1 - (1 - q_1)^-1, t_2, ..., t_n)."""
    return point(1 / (1 - env.q(1)), *([ZERO] * (n - 1)), label="n0")


def n1_point(lam, env: ParameterEnv) -> WeightPoint:
    """(t_1 - (1 - lam)(1 - q_1)^-1, t_2 - lam (1 - q_2)^-1)."""
    lam = as_scalar(lam)
    q1, q2 = env.q(1), env.q(2)
    return point((1 - lam) / (1 - q1), lam / (1 - q2), label="n1(%s)" % lam)


def n2_point(lam, env: ParameterEnv) -> WeightPoint:
    """(t_1 - (1 - q_1)^-1, t_2 - lam)."""
    lam = as_scalar(lam)
    return point(1 / (1 - env.q(1)), lam, label="n2(%s)" % lam)


def parse_point(spec, env: ParameterEnv, n: int = 2) -> WeightPoint:
    """Presets ``n0``, ``n1(lam)``, ``n2(lam)``, ``generic(a1,a2)`` or a list of scalars."""
    if isinstance(spec, (list, tuple)):
        return point(*[parse_scalar(str(a), env.N) for a in spec])
    text = str(spec).strip()
    m = re.fullmatch(r"(\w+)\s*(?:\((.*)\))?", text)
    if not m:
        raise ValueError("cannot parse point %r" % spec)
    name, args = m.group(1), m.group(2)
    vals = [parse_scalar(a, env.N) for a in _split_args(args)] if args else []
    if name == "n0" and not vals:
        return n0_point(env, n)
    if name == "n1" and len(vals) == 1:
        return n1_point(vals[0], env)
    if name == "n2" and len(vals) == 1:
        return n2_point(vals[0], env)
    if name == "generic" and vals:
        return point(*vals, label=text)
    raise ValueError("unknown point preset %r" % spec)


def _split_args(text: str) -> List[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    out.append(cur)
    return [a.strip() for a in out if a.strip()]


# ---------------------------------------------------------------------------
# gamma sequence and the action


def gamma_sequence(pt: WeightPoint, env: ParameterEnv) -> List[Scalar]:
    """gamma_0 = 1, gamma_j = gamma_{j-1} + (q_j - 1) a_j."""
    gammas = [ONE]
    for j, a in enumerate(pt.alpha, start=1):
        gammas.append(gammas[-1] + (env.q(j) - 1) * a)
    return gammas


def sigma_action(g: Sequence[int], pt: WeightPoint, env: ParameterEnv) -> WeightPoint:
    """The point of sigma_1^{g_1} ... sigma_n^{g_n}(m), in closed form.

    Its j-th coordinate solves
    [g_j]_{q_j} gamma_{j-1} + q_1^{g_1} ... q_j^{g_j} t_j - a_j = 0.
    """
    gammas = gamma_sequence(pt, env)
    out = []
    qprod = ONE
    for j, (k, a) in enumerate(zip(g, pt.alpha), start=1):
        q = env.q(j)
        qprod = qprod * q ** k
        out.append((a - q_integer(k, q) * gammas[j - 1]) / qprod)
    return WeightPoint(tuple(out))


def sigma_action_iterated(g: Sequence[int], pt: WeightPoint, p) -> WeightPoint:
    """Same point computed by applying the affine maps of the presentation
    one step at a time: the point of sigma_i(m) is S_i^{-1}(a), where S_i is
    the map x -> (sigma_i(t_1)(x), ..., sigma_i(t_n)(x))."""
    from .core import evaluate_r

    alpha = list(pt.alpha)
    for i, k in enumerate(g):
        step = p._sigma_inv[i] if k > 0 else p.sigma[i]
        images = step.images()
        for _ in range(abs(k)):
            alpha = [evaluate_r(img, alpha) for img in images]
    return WeightPoint(tuple(alpha))


# ---------------------------------------------------------------------------
# breaks


@dataclass(frozen=True)
class BreakSet:
    """Solutions i of gamma_j = q_j^i gamma_{j-1}: none, all, a residue class
    ``residue mod modulus``, or a single integer."""

    kind: str
    residue: int = 0
    modulus: int = 0

    def contains(self, i: int) -> bool:
        if self.kind == "none":
            return False
        if self.kind == "all":
            return True
        if self.kind == "progression":
            return i % self.modulus == self.residue
        return i == self.residue

    def min_nonnegative(self) -> Optional[int]:
        if self.kind == "none":
            return None
        if self.kind == "all":
            return 0
        if self.kind == "progression":
            return self.residue
        return self.residue if self.residue >= 0 else None

    def max_negative(self) -> Optional[int]:
        if self.kind == "none":
            return None
        if self.kind == "all":
            return -1
        if self.kind == "progression":
            return self.residue - self.modulus
        return self.residue if self.residue < 0 else None

    def describe(self) -> str:
        if self.kind in ("none", "all"):
            return self.kind
        if self.kind == "progression":
            return "i = %d mod %d" % (self.residue, self.modulus)
        return "i = %d" % self.residue


def _power_exponent(q: Scalar, target: Scalar) -> Optional[int]:
    """The integer i with q^i = target for q not a root of unity, if any."""
    qf, tf = q.monomial_form(), target.monomial_form()
    if qf is None or tf is None:
        return None
    qc, qe = qf
    tc, te = tf
    qe = {v: e for v, e in qe.items() if e}
    te = {v: e for v, e in te.items() if e}
    if not qe:
        return None
    v0 = next(iter(qe))
    if te.get(v0, 0) % qe[v0]:
        return None
    i = te.get(v0, 0) // qe[v0]
    return i if q ** i == target else None


def break_exponents(pt: WeightPoint, j: int, env: ParameterEnv) -> BreakSet:
    """Solution set of gamma_j = q_j^i gamma_{j-1} over the integers."""
    gammas = gamma_sequence(pt, env)
    gj, gprev = gammas[j], gammas[j - 1]
    if gprev.is_zero():
        return BreakSet("all") if gj.is_zero() else BreakSet("none")
    ratio = gj / gprev
    if ratio.is_zero():
        return BreakSet("none")
    q = env.q(j)
    order = root_of_unity_order(q)
    if order is not None:
        power = ONE
        for i in range(order):
            if power == ratio:
                return BreakSet("progression", i, order)
            power = power * q
        return BreakSet("none")
    i = _power_exponent(q, ratio)
    return BreakSet("none") if i is None else BreakSet("single", i)


# ---------------------------------------------------------------------------
# isotropy, G-tilde and G_m


def unit_exponents(s: Scalar, N: int):
    """Write a unit monomial s = e_L^k * prod x^{e_x}, L = lcm(2, N).

    Returns (k, L, {x: e_x})."""
    from math import gcd

    form = s.monomial_form()
    if form is None:
        raise ValueError("%s is not a unit monomial" % s)
    c, exps = form
    L = 2 * N // gcd(2, N)
    cs = Scalar(c)
    power = ONE
    root = Scalar.eps(1, L)
    for k in range(L):
        if power == cs:
            return k, L, {v: e for v, e in exps.items() if e}
        power = power * root
    raise ValueError("coefficient of %s is not a root of unity of order dividing %d" % (s, L))


def product_kernel(j_max: int, env: ParameterEnv, n: int) -> Lattice:
    """{g : q_1^{g_1} ... q_j^{g_j} = 1} for j = j_max (coordinates > j_max free)."""
    data = [unit_exponents(env.q(r), env.N) for r in range(1, j_max + 1)]
    L = data[0][1] if data else 2
    names = sorted({v for _, _, ex in data for v in ex})
    torsion = [[d[0] for d in data] + [0] * (n - j_max)]
    free = [[d[2].get(v, 0) for d in data] + [0] * (n - j_max) for v in names]
    return kernel_of_unit_map(torsion, L, free, n)


def isotropy(pt: WeightPoint, env: ParameterEnv) -> Lattice:
    """{g : (q_1^{g_1} ... q_j^{g_j} - 1) gamma_j = 0 for all j}."""
    n = pt.n
    gammas = gamma_sequence(pt, env)
    lat = full_lattice(n)
    for j in range(1, n + 1):
        if not gammas[j].is_zero():
            lat = intersect(lat, product_kernel(j, env, n))
    return lat


def coordinate_kernel(n: int, j: int) -> Lattice:
    return hnf([[int(k == i) for k in range(n)] for i in range(n) if i != j - 1], n)


@dataclass(frozen=True)
class RayIntervals:
    """G-tilde as a product of integer intervals lo_j <= k <= hi_j (None = infinite)."""

    lo: Tuple[Optional[int], ...]
    hi: Tuple[Optional[int], ...]

    def contains(self, g: Sequence[int]) -> bool:
        for k, lo, hi in zip(g, self.lo, self.hi):
            if (lo is not None and k < lo) or (hi is not None and k > hi):
                return False
        return True

    def is_full(self, j: int) -> bool:
        return self.lo[j - 1] is None and self.hi[j - 1] is None

    def finite_bound(self) -> Optional[int]:
        vals = [abs(x) for x in self.lo + self.hi if x is not None]
        return max(vals) if vals else None

    def coordinate_range(self, j: int, window: int) -> List[int]:
        lo, hi = self.lo[j - 1], self.hi[j - 1]
        lo = -window if lo is None else max(lo, -window)
        hi = window if hi is None else min(hi, window)
        return list(range(lo, hi + 1))

    def to_json(self):
        return [[lo, hi] for lo, hi in zip(self.lo, self.hi)]

    def __str__(self):
        parts = []
        for lo, hi in zip(self.lo, self.hi):
            if lo is None and hi is None:
                parts.append("Z")
            else:
                parts.append("[%s, %s]" % ("-inf" if lo is None else lo, "inf" if hi is None else hi))
        return " x ".join(parts)


def g_tilde(pt: WeightPoint, env: ParameterEnv) -> RayIntervals:
    los, his = [], []
    for j in range(1, pt.n + 1):
        b = break_exponents(pt, j, env)
        i0, i1 = b.min_nonnegative(), b.max_negative()
        his.append(i0)
        los.append(None if i1 is None else i1 + 1)
    return RayIntervals(tuple(los), tuple(his))


def g_m(pt: WeightPoint, env: ParameterEnv) -> Lattice:
    """G-tilde intersected with the isotropy group; verified to be a group."""
    gt = g_tilde(pt, env)
    lat = isotropy(pt, env)
    for j in range(1, pt.n + 1):
        if not gt.is_full(j):
            lat = intersect(lat, coordinate_kernel(pt.n, j))
    for row in lat.basis:
        if not (gt.contains(row) and gt.contains([-x for x in row])):
            raise GroupnessViolated("basis vector %s of G_m leaves G-tilde" % (row,))
    return lat
