"""Simple weight modules over the rank-two quantized Weyl algebra.

``classify_case`` sorts a weight point into one of eleven families and
``build_module`` writes down the explicit action for each family.  The
independent route ``build_generic_induced`` builds the same module from the
general induced-module description: a basis {a_g v_k : g in S} and
coefficients obtained only by normalizing words in the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .bm import (TorusModuleSpec, WeightSpaceAction, commutation_scalars, nu_formula,
                 sign_normalized, simple_torus_module, torus_decompose)
from .core import (canonical_letters, evaluate_r, normalize, pair_at, qwa_presentation,
                   sign_flip_presentation, star)
from .errors import (CertificationFailed, NoFiniteDimensionalWeightSpaces, NotRootOfUnity,
                     InfiniteOrder)
from .lattice import box_reps, hnf, normalize_rank2_basis, reduce_mod_basis
from .module import Label, WeightModule
from .orbit import (WeightPoint, break_exponents, g_m, g_tilde, gamma_sequence, isotropy,
                    point, sigma_action)
from .scalars import ONE, ParameterEnv, Scalar, as_scalar, q_integer, root_of_unity_order

CASES = ("N0", "N1_BREAK_ROU", "N1_BREAK_HIGHEST", "N1_BREAK_LOWEST", "N1_NOBREAK_ROU",
         "N1_NOBREAK_GENERIC", "N2_RANK0", "N2_RANK1", "N2_RANK2", "GENERIC_BOTH_ROU",
         "GENERIC_OTHER")


# ---------------------------------------------------------------------------
# classification


def classify_case(pt: WeightPoint, env: ParameterEnv) -> str:
    if pt.n != 2:
        raise ValueError("classification covers rank two only")
    _, g1, g2 = gamma_sequence(pt, env)
    if g1.is_zero():
        if g2.is_zero():
            return "N0"
        return "N2_RANK%d" % isotropy(pt, env).rank
    if g2.is_zero():
        rou = root_of_unity_order(env.q(1)) is not None
        has_break = break_exponents(pt, 1, env).kind != "none"
        if rou:
            return "N1_BREAK_ROU" if has_break else "N1_NOBREAK_ROU"
        if not has_break:
            return "N1_NOBREAK_GENERIC"
        return "N1_BREAK_HIGHEST" if g_tilde(pt, env).hi[0] is not None else "N1_BREAK_LOWEST"
    both_rou = all(root_of_unity_order(env.q(i)) is not None for i in (1, 2))
    no_breaks = all(break_exponents(pt, j, env).kind == "none" for j in (1, 2))
    return "GENERIC_BOTH_ROU" if both_rou and no_breaks else "GENERIC_OTHER"


# ---------------------------------------------------------------------------
# helpers


def _order(s: Scalar, what: str) -> int:
    o = root_of_unity_order(s)
    if o is None:
        raise NoFiniteDimensionalWeightSpaces("%s = %s is not a root of unity" % (what, s))
    return o


def _euclid(x: int, r: int) -> Tuple[int, int]:
    """x = r k' + k'' with 0 <= k'' < r."""
    return divmod(x, r)


def _shift(pt: WeightPoint, g, env: ParameterEnv) -> WeightPoint:
    return sigma_action(g, pt, env) if any(g) else pt


def _line(lo: Optional[int], hi: Optional[int], window: Optional[int]) -> List[int]:
    lo = -window if lo is None else lo
    hi = window if hi is None else hi
    if window is not None:
        lo, hi = max(lo, -window), min(hi, window)
    return list(range(lo, hi + 1))


def _edge_into(m: WeightModule, reduce: Callable, i: int, label: Label):
    """The unique X_i edge ending at ``label``: (source label, coefficient)."""
    g, k = label
    src = list(g)
    src[i - 1] -= 1
    g_src = reduce(tuple(src))
    if g_src is None:
        return None
    for k_src in range(m.dim_m):
        e = m.x(i, (g_src, k_src))
        if e is not None and e[0] == (tuple(g), k):
            return (g_src, k_src), e[1]
    return None


def _y_by_division(reduce: Callable):
    """Y_i from Y_i X_i = t_i: divide the value of t_i at the source of the
    incoming X_i edge by that edge's coefficient."""
    def make(mref: List[WeightModule]):
        def y(i: int, label: Label):
            m = mref[0]
            found = _edge_into(m, reduce, i, label)
            if found is None:
                return None
            src, c = found
            t = m.point_of(src).alpha[i - 1]
            return src, t / c
        return y
    return make


def _module(case, env, base, dim_m, reps, finite, x, y_or_maker, params, gm_basis,
            index_set, reduce=None, scale=None) -> WeightModule:
    """Build a module; ``y_or_maker`` is a function or a division-rule maker."""
    p = qwa_presentation(2, env)
    holder: List[WeightModule] = []
    y = y_or_maker(holder) if getattr(y_or_maker, "division_rule", False) else y_or_maker
    m = WeightModule(case, env, p, base, dim_m, reps, finite, x, y, params, "qwa",
                     gm_basis, index_set, scale=scale)
    m.reduce = reduce
    holder.append(m)
    return m


def _division(reduce):
    maker = _y_by_division(reduce)
    maker.division_rule = True
    return maker


def _params(rho, mu) -> Dict[str, Scalar]:
    out = {"rho": as_scalar(rho)}
    if mu is not None:
        out["mu"] = as_scalar(mu)
    return out


# ---------------------------------------------------------------------------
# constants for the rank-two n^(2) family


def r_g(g: Sequence[int], lam, env: ParameterEnv) -> Scalar:
    """(1 - q_1)^{|g_1|} (lam^{-1} q_2^{(g_2 - 1)/2})^{|g_2|}."""
    g1, g2 = g
    q1, q2 = env.q(1), env.q(2)
    lam = as_scalar(lam)
    return (1 - q1) ** abs(g1) * lam ** (-abs(g2)) * q2 ** ((g2 - 1) * abs(g2) // 2)


def _pos(k: int) -> int:
    return max(k, 0)


def power_factor(v: Sequence[int], n: int, lam, env: ParameterEnv, printed: bool = False) -> Scalar:
    """F with (Z_1^{v_1} Z_2^{v_2})^n = F Z_1^{n v_1} Z_2^{n v_2} on M_m, where a
    negative power means (r_v a_v^*)^{|n|}.

    ``printed=True`` uses the positive-power q_1 exponent for negative n too,
    which is off by q_1^{v_1 |v_2| n(n-1)/2}."""
    v1, v2 = v
    q1, l12 = env.q(1), env.lam(1, 2)
    e = -v1 * _pos(v2) if (n >= 0 or printed) else v1 * _pos(-v2)
    return r_g(v, lam, env) ** _pos(-n) * (q1 ** e * l12 ** (-v1 * v2)) ** (n * (n - 1) // 2)


def c1_inverse_formula(a, b, lam, env: ParameterEnv, printed: bool = False) -> Scalar:
    """C_1^{-1} with a^{b_2/d_2} b^{-a_2/d_2} = C_1^{-1} X_1^{d_1} on M_m."""
    a1, a2 = a
    b1, b2 = b
    q1, l12 = env.q(1), env.lam(1, 2)
    d2 = box_reps(a, b).d2
    u, w = b2 // d2, a2 // d2
    c1p = (1 - q1) ** (-min(abs(a1 * u), abs(b1 * w))) if a2 * b2 > 0 else ONE
    return (power_factor(a, u, lam, env, printed) * power_factor(b, -w, lam, env, printed)
            * q1 ** (b1 * a2 * _pos(a2 * b2) // (d2 * d2)) * l12 ** (b1 * a2 * a2 * b2 // (d2 * d2))
            * r_g((0, -b2 * a2 // d2), lam, env).inverse() * c1p)


def c2_inverse_formula(a, b, lam, env: ParameterEnv, printed: bool = False) -> Scalar:
    """C_2^{-1} with a^{a_2'} b^{b_2'} = C_2^{-1} Z_1^{-s} Z_2^{d_2} on M_m."""
    a1, a2 = a
    b1, b2 = b
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    lam = as_scalar(lam)
    reps = box_reps(a, b)
    ap, bp = reps.a2p, reps.b2p
    c2p = (1 - q1) ** (-min(abs(a1 * ap), abs(b1 * bp))) if ap * bp < 0 else ONE
    if a2 * ap * b2 * bp < 0:
        mp = min(abs(a2 * ap), abs(b2 * bp))
        sgn = 1 if b2 * bp > 0 else -1
        c2pp = lam ** mp * q2 ** ((1 - 2 * b2 * bp + sgn * mp) * mp // 2)
    else:
        c2pp = ONE
    return (power_factor(a, ap, lam, env, printed) * power_factor(b, bp, lam, env, printed)
            * q1 ** (-b1 * bp * _pos(a2 * ap)) * l12 ** (-b1 * bp * a2 * ap) * c2p * c2pp)


def wrap_constant_formula(s: int, d2: int, lam, env: ParameterEnv, printed: bool = False) -> Scalar:
    """Scalar w with X_2^{d_2} r_{(-s,d_2)} Z_2^{-d_2} Z_1^s = w Z_1^s on M_m:
    (1 - q_1)^s q_1^{-s d_2} q_2^{d_2^2}.  The r-factor of X_2^{d_2} Z_2^{-d_2}
    is evaluated after Z_1^s has moved t_2 to lam q_1^{-s}.

    ``printed=True`` gives (1 - q_1)^s (lam^2 q_2)^{-d_2}."""
    q1, q2 = env.q(1), env.q(2)
    if printed:
        return (1 - q1) ** s * (as_scalar(lam) ** 2 * q2) ** (-d2)
    return (1 - q1) ** s * q1 ** (-s * d2) * q2 ** (d2 * d2)


def _power_word(s: Sequence[int], e: int, alpha, p) -> Tuple[tuple, Scalar]:
    """Word for (a_s)^e on M_m, with a_s^{-1} = r_s a_s^*; returns (word, scalar)."""
    w = canonical_letters(s)
    if e >= 0:
        return w * e, ONE
    r = pair_at(s, alpha, p).inverse()
    return star(w) * (-e), r ** (-e)


def _oracle_value(parts, alpha, p, expected_degree) -> Scalar:
    word, factor = (), ONE
    for s, e in parts:
        w, f = _power_word(s, e, alpha, p)
        word += w
        factor = factor * f
    cw = normalize(word, p)
    if tuple(cw.degree) != tuple(expected_degree):
        raise CertificationFailed("oracle word has degree %s, expected %s"
                                  % (cw.degree, tuple(expected_degree)))
    return factor * cw.coeff * evaluate_r(cw.r_factor, alpha)


@dataclass
class InducedConstants:
    a: Tuple[int, int]
    b: Tuple[int, int]
    d1: int
    d2: int
    s: int
    a2p: int
    b2p: int
    nu: Scalar
    c1: Scalar
    c2: Scalar
    wrap: Scalar
    r_table: Dict[Tuple[int, int], Scalar] = field(default_factory=dict)
    oracle: Dict[str, Scalar] = field(default_factory=dict)

    def k1(self, k: int, r: int) -> Tuple[int, int]:
        return _euclid(k - self.a[1] // self.d2, r)

    def k2(self, k: int, r: int) -> Tuple[int, int]:
        return _euclid(self.b2p + k, r)

    def k3(self, k2pp: int, r: int) -> Tuple[int, int]:
        return _euclid(k2pp - self.a[1] // self.d2, r)


def induced_constants(a, b, pt: WeightPoint, env: ParameterEnv, r_window: int = 2,
                      certify: bool = True) -> InducedConstants:
    """Closed-form constants of the rank-two n^(2) family, each certified against
    normalizing the defining word and evaluating it on the weight space."""
    a, b = tuple(a), tuple(b)
    reps = box_reps(a, b)
    lam = pt.alpha[1]
    p = qwa_presentation(2, env)
    alpha = pt.alpha
    d1, d2, s = reps.d1, reps.d2, reps.s
    nu = nu_formula(a, b, env)
    c1 = c1_inverse_formula(a, b, lam, env).inverse()
    c2 = c2_inverse_formula(a, b, lam, env).inverse()
    wrap = wrap_constant_formula(s, d2, lam, env)
    oracle = {}
    oracle["nu"] = commutation_scalars([a, b], pt, p)[0][1]
    oracle["c1"] = _oracle_value([(a, b[1] // d2), (b, -a[1] // d2)], alpha, p, (d1, 0)).inverse()
    oracle["c2"] = _oracle_value([(a, reps.a2p), (b, reps.b2p)], alpha, p, (-s, d2)).inverse()
    # X_2^{d2} r_{(-s,d2)} Z_2^{-d2} Z_1^s acting on M_m
    word = (("X", 2),) * d2 + (("Y", 2),) * d2 + (("X", 1),) * s
    cw = normalize(word, p)
    oracle["wrap"] = (pair_at((-s, d2), alpha, p).inverse() * cw.coeff
                      * evaluate_r(cw.r_factor, alpha))
    table = {}
    for g1 in range(-r_window, r_window + 1):
        for g2 in range(-r_window, r_window + 1):
            rg = r_g((g1, g2), lam, env)
            if rg * pair_at((g1, g2), alpha, p) != ONE:
                raise CertificationFailed("r_g * pairing != 1 at g = %s" % ((g1, g2),))
            table[(g1, g2)] = rg
    for name, value in (("nu", nu), ("c1", c1), ("c2", c2), ("wrap", wrap)):
        if certify and value != oracle[name]:
            raise CertificationFailed("%s: closed form %s differs from oracle %s"
                                      % (name, env.fmt(value), env.fmt(oracle[name])))
    return InducedConstants(a, b, d1, d2, s, reps.a2p, reps.b2p, nu, c1, c2, wrap, table, oracle)


# ---------------------------------------------------------------------------
# the eleven families


def build_module(tag: str, pt: WeightPoint, env: ParameterEnv, rho, mu=None,
                 window: Optional[int] = None, basis=None) -> WeightModule:
    """Explicit module of the given family through the orbit of ``pt``.

    The base point is moved to the family's canonical position (the extremal
    point of the support when there is one).  ``basis`` overrides the G_m basis
    (a, b) in the rank-two n^(2) family.
    """
    found = classify_case(pt, env)
    if tag != found:
        raise ValueError("point belongs to %s, not %s" % (found, tag))
    builder = _BUILDERS[tag]
    m = builder(pt, env, as_scalar(rho), None if mu is None else as_scalar(mu), basis)
    if not m.finite and window is not None:
        m.labels(window)
    return m


def _build_n0(pt, env, rho, mu, basis):
    q1 = env.q(1)

    def x(i, lab):
        return (lab, rho) if i == 1 else None

    def y(i, lab):
        return (lab, 1 / (rho * (1 - q1))) if i == 1 else None

    def reduce(g):
        return (0, 0) if g[1] == 0 else None

    return _module("N0", env, pt, 1, lambda w: [(0, 0)], True, x, y, _params(rho, None),
                   [(1, 0)], "{0}", reduce)


def _n1_break_top(pt, env, rho, case, length):
    """Base at the top of the X_1 chain; v_j = Y_1^j v_0 has label (-j, 0)."""
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    hi = g_tilde(pt, env).hi[0]
    base = _shift(pt, (hi, 0), env)
    lam = gamma_sequence(base, env)[1]

    def x(i, lab):
        (g1, _), k = lab
        j = -g1
        if i == 1:
            return None if j == 0 else (((g1 + 1, 0), 0), q_integer(j, q1))
        return (lab, rho * l12 ** j * q1 ** j)

    def y(i, lab):
        (g1, _), k = lab
        j = -g1
        if i == 1:
            if length is not None and j == length - 1:
                return None
            return (((g1 - 1, 0), 0), ONE)
        return (lab, lam / ((1 - q2) * rho) * l12 ** (-j))

    def reduce(g):
        if g[0] > 0 or (length is not None and g[0] <= -length):
            return None
        return (g[0], 0)

    def reps(window):
        lo = -(length - 1) if length is not None else None
        return [(g1, 0) for g1 in reversed(_line(lo, 0, window))]

    index = "N_%d" % length if length is not None else "Z^-"
    return _module(case, env, base, 1, reps, length is not None, x, y, _params(rho, None),
                   [(0, 1)], index, reduce)


def _build_n1_break_rou(pt, env, rho, mu, basis):
    return _n1_break_top(pt, env, rho, "N1_BREAK_ROU", _order(env.q(1), "q1"))


def _build_n1_break_highest(pt, env, rho, mu, basis):
    return _n1_break_top(pt, env, rho, "N1_BREAK_HIGHEST", None)


def _build_n1_break_lowest(pt, env, rho, mu, basis):
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    lo = g_tilde(pt, env).lo[0]
    base = _shift(pt, (lo, 0), env)
    lam = gamma_sequence(base, env)[1]

    def x(i, lab):
        (j, _), k = lab
        if i == 1:
            return (((j + 1, 0), 0), ONE)
        return (lab, (q1 * l12) ** (-j) * rho)

    def y(i, lab):
        (j, _), k = lab
        if i == 1:
            return None if j == 0 else (((j - 1, 0), 0), q_integer(-j, q1))
        return (lab, lam * l12 ** j / ((1 - q2) * rho))

    def reduce(g):
        return (g[0], 0) if g[0] >= 0 else None

    return _module("N1_BREAK_LOWEST", env, base, 1,
                   lambda w: [(j, 0) for j in _line(0, None, w)], False, x, y,
                   _params(rho, None), [(0, 1)], "Z^+", reduce)


def _build_n1_nobreak_rou(pt, env, rho, mu, basis):
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    lam = gamma_sequence(pt, env)[1]
    o1 = _order(q1, "q1")
    r = _order(l12 ** o1, "lambda12^o1")

    def x(i, lab):
        (a, _), j = lab
        if i == 1:
            if a < o1 - 1:
                return (((a + 1, 0), j), ONE)
            return (((0, 0), j), l12 ** (o1 * j) * rho)
        c = q1 ** (-a) * l12 ** (-a)
        return (((a, 0), j + 1), c) if j < r - 1 else (((a, 0), 0), c * mu)

    def y(i, lab):
        (a, _), j = lab
        if i == 1:
            if a == 0:
                return (((o1 - 1, 0), j), (1 - lam * q1) / (1 - q1) * l12 ** (-o1 * j) / rho)
            return (((a - 1, 0), j), (1 - lam * q1 ** (1 - a)) / (1 - q1))
        c = l12 ** a * lam / (1 - q2)
        return (((a, 0), r - 1), c / mu) if j == 0 else (((a, 0), j - 1), c)

    def reduce(g):
        return (g[0] % o1, 0)

    return _module("N1_NOBREAK_ROU", env, pt, r, lambda w: [(a, 0) for a in range(o1)], True,
                   x, y, _params(rho, mu), [(o1, 0), (0, 1)], "N_%d" % o1, reduce)


def _build_n1_nobreak_generic(pt, env, rho, mu, basis):
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    lam = gamma_sequence(pt, env)[1]

    def x(i, lab):
        (j, _), k = lab
        if i == 1:
            return (((j + 1, 0), 0), ONE)
        return (lab, q1 ** (-j) * l12 ** (-j) * rho)

    def y(i, lab):
        (j, _), k = lab
        if i == 1:
            return (((j - 1, 0), 0), (1 - lam * q1 ** (1 - j)) / (1 - q1))
        return (lab, l12 ** j * lam / ((1 - q2) * rho))

    def scale(lab):
        (j, _), _k = lab
        if j >= 0:
            return ONE
        den = ONE
        for k in range(1, -j + 1):
            den = den * (1 - lam * q1 ** k)
        return (1 - q1) ** (-j) / den

    return _module("N1_NOBREAK_GENERIC", env, pt, 1,
                   lambda w: [(j, 0) for j in _line(None, None, w)], False, x, y,
                   _params(rho, None), [(0, 1)], "Z", lambda g: (g[0], 0), scale)


def _build_n2_rank0(pt, env, rho, mu, basis):
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    lam = pt.alpha[1]

    def x(i, lab):
        (g1, g2), k = lab
        if i == 1:
            return (((g1 + 1, g2), 0), ONE if g1 >= 0 else 1 / (1 - q1))
        c = (q1 * l12) ** (-g1)
        if g2 < 0:
            c = c * lam * q2 ** (-g2)
        return (((g1, g2 + 1), 0), c)

    def reduce(g):
        return tuple(g)

    def reps(w):
        return [(g1, g2) for g1 in _line(None, None, w) for g2 in _line(None, None, w)]

    return _module("N2_RANK0", env, pt, 1, reps, False, x, _division(reduce), {}, [],
                   "Z x Z", reduce)


def _build_n2_rank1(pt, env, rho, mu, basis):
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    lam = pt.alpha[1]
    if basis is None:
        (a, b), = sign_normalized(g_m(pt, env).basis)
    else:
        (a, b), = basis
    if a == 0:
        return _n2_rank1_vertical(pt, env, rho, abs(b))

    def x(i, lab):
        (g1, j), k = lab
        if i == 1:
            if g1 < a - 1:
                return (((g1 + 1, j), 0), ONE)
            c = (r_g((0, b), lam, env) * q1 ** (a * (_pos(j) + _pos(-b)))
                 * l12 ** (a * (j - b)) * rho * _cancel_factor(j, b, lam, q2))
            return (((0, j - b), 0), c)
        c = q1 ** (-g1) * l12 ** (-g1)
        if j < 0:
            c = c * lam * q2 ** (-j)
        return (((g1, j + 1), 0), c)

    def reduce(g):
        t = g[0] // a
        return (g[0] - t * a, g[1] - t * b)

    def reps(w):
        return [(i, j) for i in range(a) for j in _line(None, None, w)]

    return _module("N2_RANK1", env, pt, 1, reps, False, x, _division(reduce),
                   _params(rho, None), [(a, b)], "N_%d x Z" % a, reduce)


def _cancel_factor(j: int, b: int, lam, q2) -> Scalar:
    """Value on M_m of Z_2^j Z_2^{-b} Z_2^{b-j}: the X_2 Y_2 (or Y_2 X_2) pairs
    cancelled when j and -b have opposite signs."""
    if b > 0 and j > 0:
        m = min(j, b)
        return lam ** m * q2 ** ((1 + 2 * b - m) * m // 2)
    if b < 0 and j < 0:
        m = min(-j, -b)
        return lam ** m * q2 ** (-m * (-b - m) - m * (m - 1) // 2)
    return ONE


def _n2_rank1_vertical(pt, env, rho, b):
    """G_m = {0} x bZ: S = Z x {0, ..., b-1} and a_{(0,b)} = X_2^b acts by rho."""
    q1, l12 = env.q(1), env.lam(1, 2)

    def x(i, lab):
        (g1, j), k = lab
        if i == 1:
            return (((g1 + 1, j), 0), ONE if g1 >= 0 else 1 / (1 - q1))
        c = (q1 * l12) ** (-g1)
        if j < b - 1:
            return (((g1, j + 1), 0), c)
        return (((g1, 0), 0), c * rho)

    def reduce(g):
        return (g[0], g[1] % b)

    def reps(w):
        return [(i, j) for i in _line(None, None, w) for j in range(b)]

    return _module("N2_RANK1", env, pt, 1, reps, False, x, _division(reduce),
                   _params(rho, None), [(0, b)], "Z x N_%d" % b, reduce)


def _build_n2_rank2(pt, env, rho, mu, basis):
    q1, l12 = env.q(1), env.lam(1, 2)
    if basis is None:
        a, b = normalize_rank2_basis(g_m(pt, env))
    else:
        a, b = (tuple(v) for v in basis)
        lat = g_m(pt, env)
        given = hnf([a, b], 2)
        if not all(lat.contains(v) for v in (a, b)) or not all(given.contains(v) for v in lat.basis):
            raise ValueError("%s, %s is not a basis of G_m" % (a, b))
    const = induced_constants(a, b, pt, env)
    d1, d2, s = const.d1, const.d2, const.s
    nu = const.nu
    r = _order(nu, "nu")
    u = b[1] // d2
    ap = const.a2p

    def x(i, lab):
        (gi, gj), k = lab
        if i == 1:
            if gi < d1 - 1:
                return (((gi + 1, gj), k), ONE)
            k1p, k1pp = const.k1(k, r)
            c = (q1 ** (gj * d1) * l12 ** (gj * d1) * const.c1 * nu ** (u * k1pp)
                 * rho ** u * mu ** k1p)
            return (((0, gj), k1pp), c)
        pre = (q1 * l12) ** (-gi)
        if gj < d2 - 1:
            return (((gi, gj + 1), k), pre)
        k2p, k2pp = const.k2(k, r)
        c = pre * const.wrap * const.c2 * nu ** (ap * k2pp) * rho ** ap * mu ** k2p
        if gi + s <= d1 - 1:
            return (((gi + s, 0), k2pp), c)
        k3p, k3pp = const.k3(k2pp, r)
        c = c * const.c1 * nu ** (k3pp * u) * rho ** u * mu ** k3p
        return (((gi + s - d1, 0), k3pp), c)

    def reduce(g):
        v, _ = reduce_mod_basis(g, a, b)
        return v

    m = _module("N2_RANK2", env, pt, r, lambda w: box_reps(a, b).box(), True, x,
                _division(reduce), _params(rho, mu), [a, b], "N_%d x N_%d" % (d1, d2), reduce)
    m.constants = const
    return m


def _build_generic_both_rou(pt, env, rho, mu, basis):
    q1, l12 = env.q(1), env.lam(1, 2)
    o1, o2 = _order(q1, "q1"), _order(env.q(2), "q2")
    r = _order(l12 ** (o1 * o2), "lambda12^(o1 o2)")

    def x(i, lab):
        (gi, gj), k = lab
        if i == 1:
            if gi < o1 - 1:
                return (((gi + 1, gj), k), ONE)
            return (((0, gj), k), l12 ** (o1 * (o2 * k + gj)) * rho)
        pre = (q1 * l12) ** (-gi)
        if gj < o2 - 1:
            return (((gi, gj + 1), k), pre)
        if k < r - 1:
            return (((gi, 0), k + 1), pre)
        return (((gi, 0), 0), pre * mu)

    def reduce(g):
        return (g[0] % o1, g[1] % o2)

    return _module("GENERIC_BOTH_ROU", env, pt, r,
                   lambda w: [(i, j) for i in range(o1) for j in range(o2)], True, x,
                   _division(reduce), _params(rho, mu), [(o1, 0), (0, o2)],
                   "N_%d x N_%d" % (o1, o2), reduce)


def _coordinate_shape(pt, env, j):
    """('cyclic', o) | ('line',) | ('finite', d) | ('up',) | ('down',) and the shift
    moving the base point to the start of the index set."""
    gt = g_tilde(pt, env)
    lo, hi = gt.lo[j - 1], gt.hi[j - 1]
    if lo is None and hi is None:
        o = root_of_unity_order(env.q(j))
        return (("cyclic", o) if o is not None else ("line",)), 0
    if lo is not None and hi is not None:
        return ("finite", hi - lo + 1), lo
    if lo is not None:
        return ("up",), lo
    return ("down",), hi


def _members(shape, window):
    kind = shape[0]
    if kind in ("cyclic", "finite"):
        return list(range(shape[1]))
    if kind == "line":
        return _line(None, None, window)
    if kind == "up":
        return _line(0, None, window)
    return _line(None, 0, window)


def _contains(shape, k):
    kind = shape[0]
    if kind in ("cyclic", "finite"):
        return 0 <= k < shape[1]
    if kind == "up":
        return k >= 0
    if kind == "down":
        return k <= 0
    return True


def _index_name(shape):
    return {"cyclic": "N_%s", "finite": "N_%s"}.get(shape[0], "") % shape[1:] if shape[0] in (
        "cyclic", "finite") else {"line": "Z", "up": "Z^+", "down": "Z^-"}[shape[0]]


def _build_generic_other(pt, env, rho, mu, basis):
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    sh1, s1 = _coordinate_shape(pt, env, 1)
    sh2, s2 = _coordinate_shape(pt, env, 2)
    base = _shift(pt, (s1, s2), env)
    al1, al2 = base.alpha
    gam1 = gamma_sequence(base, env)[1]
    finite = sh1[0] in ("cyclic", "finite") and sh2[0] in ("cyclic", "finite")
    cyc1, cyc2 = sh1[0] == "cyclic", sh2[0] == "cyclic"
    d1 = sh1[1] if len(sh1) > 1 else None
    d2 = sh2[1] if len(sh2) > 1 else None

    def x(i, lab):
        (gi, gj), k = lab
        if i == 1:
            if _contains(sh1, gi + 1):
                return (((gi + 1, gj), 0), ONE)
            if cyc1:
                return (((0, gj), 0), rho * l12 ** (d1 * gj))
            return None
        pre = (q1 * l12) ** (-gi)
        if _contains(sh2, gj + 1):
            return (((gi, gj + 1), 0), pre)
        if cyc2:
            return (((gi, 0), 0), pre * mu)
        return None

    def y(i, lab):
        (gi, gj), k = lab
        if i == 1:
            c = q1 ** (1 - gi) * (al1 - q_integer(gi - 1, q1))
            if _contains(sh1, gi - 1):
                return (((gi - 1, gj), 0), c)
            if cyc1:
                return (((d1 - 1, gj), 0), c / (rho * l12 ** (d1 * gj)))
            return None
        c = l12 ** gi * q2 ** (1 - gj) * (al2 - q_integer(gj - 1, q2) * gam1)
        if _contains(sh2, gj - 1):
            return (((gi, gj - 1), 0), c)
        if cyc2:
            return (((gi, d2 - 1), 0), c / mu)
        return None

    def reduce(g):
        g1, g2 = g
        if cyc1:
            g1 %= d1
        if cyc2:
            g2 %= d2
        return (g1, g2) if _contains(sh1, g1) and _contains(sh2, g2) else None

    def reps(w):
        return [(i, j) for i in _members(sh1, w) for j in _members(sh2, w)]

    gm = [(d1, 0)] if cyc1 else ([(0, d2)] if cyc2 else [])
    params = {"rho": rho} if cyc1 else ({"mu": mu} if cyc2 else {})
    return _module("GENERIC_OTHER", env, base, 1, reps, finite, x, y, params, gm,
                   "%s x %s" % (_index_name(sh1), _index_name(sh2)), reduce)


_BUILDERS = {
    "N0": _build_n0,
    "N1_BREAK_ROU": _build_n1_break_rou,
    "N1_BREAK_HIGHEST": _build_n1_break_highest,
    "N1_BREAK_LOWEST": _build_n1_break_lowest,
    "N1_NOBREAK_ROU": _build_n1_nobreak_rou,
    "N1_NOBREAK_GENERIC": _build_n1_nobreak_generic,
    "N2_RANK0": _build_n2_rank0,
    "N2_RANK1": _build_n2_rank1,
    "N2_RANK2": _build_n2_rank2,
    "GENERIC_BOTH_ROU": _build_generic_both_rou,
    "GENERIC_OTHER": _build_generic_other,
}


def weight_space_spec(m: WeightModule) -> TorusModuleSpec:
    """Parameters of the weight space M_m of a built module, in the form taken
    by ``build_generic_induced``."""
    k = len(m.gm_basis)
    rho, mu = m.params.get("rho"), m.params.get("mu")
    if k == 0:
        return TorusModuleSpec()
    if k == 1:
        return TorusModuleSpec([], [rho if rho is not None else mu])
    if m.dim_m == 1:
        return TorusModuleSpec([], [rho, mu])
    return TorusModuleSpec([(rho, mu)], [])


# ---------------------------------------------------------------------------
# induced module from normalized words


def build_generic_induced(pt: WeightPoint, env: ParameterEnv, weight_space: TorusModuleSpec,
                          window: Optional[int] = None, basis=None) -> WeightModule:
    """Module with basis {a_g v_k : g in S}; X_i a_g v = a_h b_{g,i} v where
    h = zeta(g + e_i) and b_{g,i} = (-h)(X_i a_g a'_{g+e_i-h} a'_h) a_{g+e_i-h},
    a'_g = r_g a_g^*, and similarly for Y_i.  Only normalization is used."""
    p = qwa_presentation(pt.n, env)
    n = pt.n
    gt = g_tilde(pt, env)
    lat = g_m(pt, env)
    if basis is None:
        if lat.rank == 2 and n == 2:
            basis = list(normalize_rank2_basis(lat))
        else:
            basis = sign_normalized(lat.basis)
    basis = [tuple(s) for s in basis]
    if lat.rank:
        lam = commutation_scalars(basis, pt, p)
        try:
            dec = torus_decompose(lam, env)
            tm = simple_torus_module(dec, weight_space)
        except (NotRootOfUnity, InfiniteOrder) as exc:
            raise NoFiniteDimensionalWeightSpaces(str(exc))
        matrices, dim_m = tm.generators, tm.dim
    else:
        matrices, dim_m = [], 1
    wsa = WeightSpaceAction(p, pt.alpha, basis, matrices, dim_m)
    rank = len(basis)

    if rank == 2:
        a, b = basis

        def reduce(g):
            return reduce_mod_basis(g, a, b)[0] if gt.contains(g) else None

        def reps(window):
            return box_reps(a, b).box()

        finite = True
    elif rank == 1:
        (s,) = basis
        lead = next(i for i, x in enumerate(s) if x)

        def reduce(g):
            if not gt.contains(g):
                return None
            t = g[lead] // s[lead]
            return tuple(x - t * y for x, y in zip(g, s))

        free = [j for j in range(n) if j != lead]
        finite = all(gt.lo[j] is not None and gt.hi[j] is not None for j in free)

        def reps(window):
            ranges = []
            for j in range(n):
                if j == lead:
                    ranges.append(range(abs(s[lead])))
                else:
                    ranges.append(_line(gt.lo[j], gt.hi[j], None if finite else window))
            return _product(ranges)

    else:
        def reduce(g):
            return tuple(g) if gt.contains(g) else None

        finite = all(lo is not None and hi is not None for lo, hi in zip(gt.lo, gt.hi))

        def reps(window):
            return _product([_line(lo, hi, None if finite else window)
                             for lo, hi in zip(gt.lo, gt.hi)])

    pairings: Dict[tuple, Scalar] = {}

    def r_of(g):
        g = tuple(g)
        if g not in pairings:
            pairings[g] = pair_at(g, pt.alpha, p).inverse()
        return pairings[g]

    def action(letter, sign):
        def act(i, lab):
            g, k = lab
            raw = list(g)
            raw[i - 1] += sign
            raw = tuple(raw)
            h = reduce(raw)
            if h is None:
                return None
            d = tuple(x - y for x, y in zip(raw, h))
            word = ((letter, i),) + canonical_letters(g) + star(canonical_letters(d)) \
                + star(canonical_letters(h))
            cw = normalize(word, p)
            if any(cw.degree):
                raise CertificationFailed("degree-zero word normalized to degree %s" % (cw.degree,))
            shifted = p.act(tuple(-x for x in h), cw.r_factor)
            kappa = cw.coeff * evaluate_r(shifted, pt.alpha) * r_of(d) * r_of(h)
            if kappa.is_zero():
                return None
            img = wsa.degree_matrix(d).apply(k)
            if img is None:
                return None
            return ((h, img[0]), kappa * img[1])
        return act

    params = {}
    for i, (rho_i, mu_i) in enumerate(weight_space.params):
        params["rho%d" % (i + 1)] = as_scalar(rho_i)
        params["mu%d" % (i + 1)] = as_scalar(mu_i)
    for i, chi in enumerate(weight_space.characters):
        params["chi%d" % (i + 1)] = as_scalar(chi)
    m = WeightModule("INDUCED", env, p, pt, dim_m, reps, finite, action("X", 1),
                     action("Y", -1), params, "qwa", basis, "")
    m.reduce = reduce
    if not finite and window is not None:
        m.labels(window)
    return m


def _product(ranges):
    out = [()]
    for r in ranges:
        out = [t + (x,) for t in out for x in r]
    return out


def gauge_scale(m1: WeightModule, m2: WeightModule, labels: List[Label]) -> Dict[Label, Scalar]:
    """Scalars s with v1(l) = s(l) v2(l), propagated from the first label along
    the edges of m1 inside ``labels`` (breadth first)."""
    inside = set(labels)
    scale: Dict[Label, Scalar] = {}
    for root in labels:
        if root in scale:
            continue
        scale[root] = ONE
        queue = [root]
        while queue:
            lab = queue.pop(0)
            for letter in "XY":
                for i in range(1, m1.n + 1):
                    e1, e2 = m1.act(letter, i, lab), m2.act(letter, i, lab)
                    if e1 is None or e2 is None or e1[0] != e2[0] or e1[0] not in inside:
                        continue
                    if e1[0] not in scale:
                        scale[e1[0]] = e2[1] * scale[lab] / e1[1]
                        queue.append(e1[0])
    return scale


def compare_modules(m1: WeightModule, m2: WeightModule, window: Optional[int] = None,
                    use_scale: bool = True, gauge: bool = False) -> List[str]:
    """Coefficient-by-coefficient comparison on the labels of m1 in the window.

    When m1 declares a basis scale (v = scale * a_g v_k), m1's coefficients are
    compared with m2's after that change of basis.  With ``gauge=True`` the
    diagonal change of basis is solved for on a spanning forest and every
    remaining coefficient must then agree."""
    diffs = []
    labels = m1.labels(window)
    other = set(m2.labels(window))
    if set(labels) != other:
        diffs.append("label sets differ: %d vs %d" % (len(labels), len(other)))
    if gauge:
        table = gauge_scale(m1, m2, labels)
        sc = lambda lab: table.get(lab, ONE)
    elif use_scale and m1.scale is not None:
        sc = m1.scale
    else:
        sc = lambda lab: ONE
    inside = set(labels)
    for lab in labels:
        for letter in "XY":
            for i in range(1, m1.n + 1):
                e1 = m1.act(letter, i, lab)
                e2 = m2.act(letter, i, lab)
                if e1 is None and e2 is None:
                    continue
                if e1 is None or e2 is None or e1[0] != e2[0]:
                    diffs.append("%s%d on %s: %s vs %s" % (letter, i, lab, e1, e2))
                    continue
                if gauge and e1[0] not in inside:
                    continue
                c2 = e2[1] * sc(lab) / sc(e1[0])
                if e1[1] != c2:
                    diffs.append("%s%d on %s: %s vs %s" % (letter, i, lab, e1[1], c2))
    return diffs


# ---------------------------------------------------------------------------
# modules with breaks


def example_sign_flip_module() -> WeightModule:
    """Two-dimensional simple module over the sign-flip algebra with an inner
    break at m = (t_1, t_2 + 1) but no proper inner breaks."""
    p = sign_flip_presentation()
    env = ParameterEnv(1)
    v, w = ((0, 0), 0), ((0, 1), 0)
    points = {v: point(0, -1), w: point(0, 1)}
    table = {("X", 2): {v: (w, ONE), w: (v, ONE)},
             ("Y", 2): {v: (w, ONE), w: (v, Scalar(-1))}}

    def x(i, lab):
        return table.get(("X", i), {}).get(lab)

    def y(i, lab):
        return table.get(("Y", i), {}).get(lab)

    return WeightModule("EXAMPLE_SIGN_FLIP", env, p, points[v], 1,
                        lambda win: [(0, 0), (0, 1)], True, x, y, {}, "signflip", [],
                        "{v, w}", points)


def example_proper_break_module(env: Optional[ParameterEnv] = None) -> WeightModule:
    """Simple module at n_0 with X_2 M_m != 0 but Y_2 X_2 M_m = 0; needs
    q_1 lambda_12 a root of unity of order r (dimension r)."""
    if env is None:
        env = ParameterEnv(6, {"q1": "e^2", "l12": "e"})
    q1, l12 = env.q(1), env.lam(1, 2)
    ql = q1 * l12
    r = root_of_unity_order(ql)
    if r is None:
        raise NoFiniteDimensionalWeightSpaces("q1*l12 must be a root of unity")
    base = point(1 / (1 - q1), 0, label="n0")

    def x(i, lab):
        _, k = lab
        if i == 1:
            return (((0, 0), (k + 1) % r), ONE)
        return (lab, ql ** (-k))

    def y(i, lab):
        _, k = lab
        if i == 1:
            return (((0, 0), (k - 1) % r), 1 / (1 - q1))
        return None

    points = {((0, 0), k): base for k in range(r)}
    return WeightModule("EXAMPLE_PROPER_BREAK", env, qwa_presentation(2, env), base, r,
                        lambda win: [(0, 0)], True, x, y, {}, "qwa", [], "{0}", points)


def fixture_modules(env: Optional[ParameterEnv] = None) -> List[WeightModule]:
    return [example_sign_flip_module(), example_proper_break_module(env)]


# ---------------------------------------------------------------------------
# small instances of every family

SMALL_ROU = {"q1": "e^4", "q2": "e^3", "l12": "e^2"}


@dataclass
class Instance:
    """A weight point with parameters, chosen so the point lands in ``case``."""

    case: str
    env: ParameterEnv
    point: WeightPoint
    basis: Optional[list] = None
    note: str = ""

    def build(self, rho=None, mu=None) -> WeightModule:
        rho = Scalar.param("rho") if rho is None else rho
        mu = Scalar.param("mu") if mu is None else mu
        return build_module(self.case, self.point, self.env, rho, mu, basis=self.basis)


def example_instances() -> List[Instance]:
    """One or more instances per family; q_1 = e_3, q_2 = e_4, lambda_12 = e_6
    (N = 12) where a root of unity is wanted, free parameters otherwise."""
    from .orbit import n0_point, n1_point, n2_point

    rou = ParameterEnv(12, SMALL_ROU)
    free1 = ParameterEnv(12, {"q2": "e^3", "l12": "e^2"})
    free = ParameterEnv(12, {})
    cyc = ParameterEnv(12, {"q1": "e^4", "l12": "e^2"})
    a, a1, a2 = Scalar.param("a"), Scalar.param("a1"), Scalar.param("a2")
    # gamma_2 = q_2^{-2} gamma_1 with gamma_1 = 1 + (q_1 - 1) a_1
    g1 = 1 + (cyc.q(1) - 1) * a1
    cyc_alpha2 = (cyc.q(2) ** -2 - 1) * g1 / (cyc.q(2) - 1)
    out = [
        Instance("N0", rou, n0_point(rou)),
        Instance("N1_BREAK_ROU", rou, n1_point(rou.q(1), rou)),
        Instance("N1_BREAK_HIGHEST", free1, n1_point(free1.q(1) ** 2, free1)),
        Instance("N1_BREAK_LOWEST", free1, n1_point(free1.q(1) ** -2, free1)),
        Instance("N1_NOBREAK_ROU", rou, n1_point(a, rou)),
        Instance("N1_NOBREAK_GENERIC", free1, n1_point(a, free1)),
        Instance("N2_RANK0", free, n2_point(a, free)),
        Instance("N2_RANK1", ParameterEnv(12, {"q1": "e^4", "l12": "e^2"}),
                 n2_point(a, ParameterEnv(12, {"q1": "e^4"})), note="G_m = <(3, 0)>"),
        Instance("N2_RANK1", free1, n2_point(a, free1), note="G_m = <(0, 4)>"),
        Instance("N2_RANK1", ParameterEnv(12, {"q2": "-s^2", "q1": "s", "l12": "e^2"}),
                 n2_point(a, ParameterEnv(12, {"q1": "s"})), note="G_m = <(4, -2)>"),
        Instance("N2_RANK1", ParameterEnv(12, {"q1": "s", "q2": "s^-2", "l12": "e^2"}),
                 n2_point(a, ParameterEnv(12, {"q1": "s"})), note="G_m = <(2, 1)>"),
        Instance("N2_RANK2", rou, n2_point(a, rou)),
        Instance("N2_RANK2", ParameterEnv(10, {"q1": "e^6", "q2": "e", "l12": "e"}),
                 n2_point(a, ParameterEnv(10, {"q1": "e^6"})), basis=[(2, -2), (3, 2)],
                 note="a = (2, -2), b = (3, 2)"),
        Instance("N2_RANK2", ParameterEnv(20, {"q1": "e^12", "q2": "e^2", "l12": "e"}),
                 n2_point(a, ParameterEnv(20, {"q1": "e^12"})), basis=[(2, -2), (3, 2)],
                 note="a = (2, -2), b = (3, 2), nu = -1"),
        Instance("GENERIC_BOTH_ROU", rou, point(a1, a2)),
        Instance("GENERIC_BOTH_ROU", ParameterEnv(24, {"q1": "e^8", "q2": "e^6", "l12": "e"}),
                 point(a1, a2), note="lambda12^12 = -1"),
        Instance("GENERIC_OTHER", free, point(a1, a2), note="Z x Z"),
        Instance("GENERIC_OTHER", free, point(q_integer(2, free.q(1)), a2), note="Z^- x Z"),
        Instance("GENERIC_OTHER", free, point(q_integer(-2, free.q(1)), a2), note="Z^+ x Z"),
        Instance("GENERIC_OTHER", rou, point(ONE, a2), note="N_3 x N_4, coordinate 1 finite"),
        Instance("GENERIC_OTHER", rou, point(ONE, rou.q(1)), note="N_3 x N_4, both finite"),
        Instance("GENERIC_OTHER", cyc, point(a1, cyc_alpha2), note="N_3 x Z^+"),
    ]
    return out
