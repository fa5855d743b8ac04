"""The subalgebra of degree-preserving elements acting on one weight space.

For a weight point m with degree group G_m = Z s_1 + ... + Z s_k, the words
a_{s_i} act on M_m as invertible operators b_i with b_i b_j = lambda_ij b_j b_i.
This module computes the lambda_ij, decomposes the resulting quantum torus
into a tensor product of rank-two tori and a Laurent part, and builds its
finite-dimensional simple modules as monomial matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (TgwaPresentation, canonical_letters, evaluate_r, normalize,
                   pair_at, qwa_presentation, star)
from .errors import (DenominatorVanishes, InfiniteOrder, NotRootOfUnity, NotScalarGraded)
from .lattice import hnf, skew_normal_form
from .linear import MonomialMatrix
from .orbit import WeightPoint, g_m, g_tilde, isotropy
from .scalars import ONE, ParameterEnv, Scalar, as_scalar, format_scalar, root_of_unity_order

IntVec = Tuple[int, ...]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def lattice_coordinates(basis: Sequence[Sequence[int]], g: Sequence[int]) -> List[int]:
    """Integer coefficients l with g = sum l_i basis_i (basis rows independent)."""
    k, n = len(basis), len(g)
    if k == 0:
        if any(g):
            raise ValueError("%s is not in the zero lattice" % (tuple(g),))
        return []
    # solve basis^T l = g by Gauss-Jordan over the rationals
    rows = [[Fraction(basis[i][c]) for i in range(k)] + [Fraction(g[c])] for c in range(n)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if piv is None:
            raise ValueError("basis rows are dependent")
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, n)):
        raise ValueError("%s is not in the span of the basis" % (tuple(g),))
    sol = [rows[i][k] for i in range(k)]
    if any(x.denominator != 1 for x in sol):
        raise ValueError("%s is not in the lattice" % (tuple(g),))
    return [int(x) for x in sol]


def integer_inverse(u: Sequence[Sequence[int]]) -> List[List[int]]:
    """Inverse of a unimodular integer matrix."""
    k = len(u)
    rows = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)]
            for i, row in enumerate(u)]
    for col in range(k):
        piv = next(i for i in range(col, k) if rows[i][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for i in range(k):
            if i != col and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    out = [[row[k + j] for j in range(k)] for row in rows]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


# ---------------------------------------------------------------------------
# commutation scalars


def _value_on_weight_space(w, alpha, p: TgwaPresentation) -> Tuple[Scalar, IntVec]:
    cw = normalize(w, p)
    return cw.coeff * evaluate_r(cw.r_factor, alpha), cw.degree


def commutation_scalars(basis: Sequence[Sequence[int]], pt: WeightPoint,
                        p: TgwaPresentation) -> List[List[Scalar]]:
    """lambda_ij with a_{s_i} a_{s_j} = lambda_ij a_{s_j} a_{s_i} on M_m."""
    if not p.scalar_graded():
        raise NotScalarGraded("commutation scalars need a scalar-graded presentation")
    k = len(basis)
    words = [canonical_letters(s) for s in basis]
    lam = [[ONE] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            left, _ = _value_on_weight_space(words[i] + words[j], pt.alpha, p)
            right, _ = _value_on_weight_space(words[j] + words[i], pt.alpha, p)
            if left.is_zero() or right.is_zero():
                raise DenominatorVanishes("a_%s a_%s vanishes on the weight space"
                                          % (tuple(basis[i]), tuple(basis[j])))
            lam[i][j] = left / right
            lam[j][i] = right / left
    return lam


def c_swap(k: int, l: int, q2) -> Scalar:
    """c(k, l) with Z_2^k Z_2^l = c(k, l) Z_2^l Z_2^k on the weight space."""
    q2 = as_scalar(q2)
    if k * l >= 0:
        return ONE
    m = min(abs(k), abs(l))
    sk, sl = (1 if k > 0 else -1), (1 if l > 0 else -1)
    # (k - l) m - (sgn k - sgn l) m^2 / 2; the second term is an integer since sk != sl
    return q2 ** ((k - l) * m - (sk - sl) * m * m // 2)


def nu_formula(a: Sequence[int], b: Sequence[int], env: ParameterEnv) -> Scalar:
    """Closed form for the commutation scalar of a_a and a_b at a point n^(2)_lambda:
    lambda_12^d q_1^{a_1 max(b_2,0) - b_1 max(a_2,0)} c(a_2, b_2)."""
    a1, a2 = a
    b1, b2 = b
    d = a1 * b2 - b1 * a2
    return (env.lam(1, 2) ** d * env.q(1) ** (a1 * max(b2, 0) - b1 * max(a2, 0))
            * c_swap(a2, b2, env.q(2)))


# ---------------------------------------------------------------------------
# presentation of B_m


@dataclass
class BmPresentation:
    basis: List[IntVec]
    lam: List[List[Scalar]]
    isotropy_basis: List[IntVec]
    g_tilde: str

    def to_json(self, N: Optional[int] = None):
        return {
            "basis": [list(s) for s in self.basis],
            "lambda": [[format_scalar(x, N) for x in row] for row in self.lam],
            "b0_degrees": {
                "description": "degrees in the isotropy lattice outside G_m act by zero",
                "isotropy": [list(s) for s in self.isotropy_basis],
                "g_tilde": self.g_tilde,
            },
        }


def sign_normalized(rows: Sequence[Sequence[int]]) -> List[IntVec]:
    """Flip rows so that their first nonzero entry is positive."""
    out = []
    for row in rows:
        lead = next((x for x in row if x), 0)
        out.append(tuple(-x for x in row) if lead < 0 else tuple(row))
    return out


def bm_presentation(pt: WeightPoint, env: ParameterEnv,
                    basis: Optional[Sequence[Sequence[int]]] = None) -> BmPresentation:
    """B_m data for a quantized Weyl algebra weight point."""
    p = qwa_presentation(pt.n, env)
    lat = g_m(pt, env)
    if basis is None:
        basis = sign_normalized(lat.basis)
    else:
        basis = [tuple(s) for s in basis]
        span = hnf(basis, pt.n)
        if len(basis) != lat.rank or span.rank != lat.rank or not all(lat.contains(s) for s in basis):
            raise ValueError("given rows are not a basis of G_m")
        if any(not span.contains(row) for row in lat.basis):
            raise ValueError("given rows do not generate G_m")
    lam = commutation_scalars(basis, pt, p)
    iso = isotropy(pt, env)
    return BmPresentation(list(basis), lam, [tuple(r) for r in iso.basis], str(g_tilde(pt, env)))


# ---------------------------------------------------------------------------
# torus decomposition


@dataclass
class TorusDecomposition:
    p: int                      # smallest p with all lambda_ij^p = 1
    theta: List[List[int]]      # lambda_ij = root^theta_ij, root primitive p-th
    root: Scalar
    U: List[List[int]]
    thetas: List[int]
    laurent_rank: int

    @property
    def lambda_root(self) -> Scalar:
        """lambda = root^{theta_1} (1 when there is no torus factor)."""
        return self.root ** self.thetas[0] if self.thetas else ONE

    @property
    def powers(self) -> List[int]:
        """p_i = theta_i / theta_1."""
        return [t // self.thetas[0] for t in self.thetas]

    def factor_parameters(self) -> List[Scalar]:
        return [self.root ** t for t in self.thetas]

    def to_json(self, N: Optional[int] = None):
        return {"p": self.powers, "theta": self.theta, "order": self.p,
                "lambda_root": format_scalar(self.lambda_root, N), "thetas": self.thetas,
                "laurent_rank": self.laurent_rank, "U": self.U}


def torus_decompose(lam: Sequence[Sequence[Scalar]], env: ParameterEnv) -> TorusDecomposition:
    k = len(lam)
    orders = []
    for i in range(k):
        for j in range(i + 1, k):
            o = root_of_unity_order(lam[i][j])
            if o is None:
                raise NotRootOfUnity("lambda_%d%d = %s is not a root of unity"
                                     % (i + 1, j + 1, format_scalar(lam[i][j], env.N)))
            orders.append(o)
    p = 1
    for o in orders:
        p = _lcm(p, o)
    L = _lcm(2, env.N)
    if L % p:
        raise NotRootOfUnity("order %d does not divide %d" % (p, L))
    root = Scalar.eps(L // p, L)
    powers = [ONE]
    for _ in range(p - 1):
        powers.append(powers[-1] * root)
    theta = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            t = powers.index(as_scalar(lam[i][j]))
            theta[i][j], theta[j][i] = t, -t
    snf = skew_normal_form(theta)
    return TorusDecomposition(p, theta, root, [list(r) for r in snf.U], list(snf.thetas),
                              snf.laurent_rank)


# ---------------------------------------------------------------------------
# simple modules


@dataclass
class TorusModuleSpec:
    """Parameters of a simple module: (rho_i, mu_i) per torus factor, a character
    value per Laurent generator."""

    params: List[Tuple[Scalar, Scalar]] = field(default_factory=list)
    characters: List[Scalar] = field(default_factory=list)


@dataclass
class TorusModule:
    decomposition: TorusDecomposition
    spec: TorusModuleSpec
    orders: List[int]
    transformed: List[MonomialMatrix]
    generators: List[MonomialMatrix]

    @property
    def dim(self) -> int:
        out = 1
        for n in self.orders:
            out *= n
        return out

    def relation_failures(self, lam: Sequence[Sequence[Scalar]]) -> List[Tuple[int, int]]:
        bad = []
        gens = self.generators
        for i in range(len(gens)):
            for j in range(len(gens)):
                if i != j and gens[i] @ gens[j] != (gens[j] @ gens[i]).scale(lam[i][j]):
                    bad.append((i, j))
        return bad


def simple_torus_module(dec: TorusDecomposition, spec: TorusModuleSpec) -> TorusModule:
    r = len(dec.thetas)
    if len(spec.params) != r or len(spec.characters) != dec.laurent_rank:
        raise ValueError("need %d (rho, mu) pairs and %d characters" % (r, dec.laurent_rank))
    factors = dec.factor_parameters()
    orders = []
    for f in factors:
        o = root_of_unity_order(f)
        if o is None:
            raise InfiniteOrder("torus parameter %s has infinite order" % f)
        orders.append(o)
    dims = orders
    total = 1
    for n in dims:
        total *= n
    # lexicographic tensor basis, first factor most significant
    strides = []
    acc = 1
    for n in reversed(dims):
        strides.append(acc)
        acc *= n
    strides.reverse()

    def digits(idx):
        return [(idx // s) % n for s, n in zip(strides, dims)]

    transformed: List[MonomialMatrix] = []
    for i in range(r):
        rho, mu = (as_scalar(x) for x in spec.params[i])
        lam_i = factors[i]
        diag = [rho * lam_i ** digits(idx)[i] for idx in range(total)]
        transformed.append(MonomialMatrix.diagonal(diag))
        images = []
        for idx in range(total):
            d = digits(idx)[i]
            if d + 1 < dims[i]:
                images.append((idx + strides[i], ONE))
            else:
                images.append((idx - d * strides[i], mu))
        transformed.append(MonomialMatrix(images))
    for chi in spec.characters:
        transformed.append(MonomialMatrix.identity(total).scale(chi))
    v = integer_inverse(dec.U)
    k = len(dec.U)
    generators = []
    for l in range(k):
        m = MonomialMatrix.identity(total)
        for i in range(k):
            if v[i][l]:
                m = m @ transformed[i] ** v[i][l]
        generators.append(m)
    return TorusModule(dec, spec, orders, transformed, generators)


def default_torus_spec(dec: TorusDecomposition, rho, mu) -> TorusModuleSpec:
    """Parameters (rho, mu) used for a single torus factor, or as the characters
    of a Laurent algebra of rank one or two."""
    rho, mu = as_scalar(rho), as_scalar(mu)
    if dec.thetas:
        if len(dec.thetas) != 1 or dec.laurent_rank:
            raise ValueError("default parameters only cover a single torus factor")
        return TorusModuleSpec([(rho, mu)], [])
    return TorusModuleSpec([], [rho, mu][:dec.laurent_rank])


# ---------------------------------------------------------------------------
# action of degree-preserving words on a weight space


class WeightSpaceAction:
    """Operators of words with degree in G_m on M_m, given matrices of the b_i."""

    def __init__(self, p: TgwaPresentation, alpha, basis: Sequence[Sequence[int]],
                 matrices: Sequence[MonomialMatrix], dim: int):
        self.p = p
        self.alpha = tuple(alpha)
        self.basis = [tuple(s) for s in basis]
        self.matrices = list(matrices)
        self.dim = dim
        self._pair: Dict[IntVec, Scalar] = {}
        self._degree: Dict[IntVec, MonomialMatrix] = {}

    def pairing(self, g: Sequence[int]) -> Scalar:
        g = tuple(g)
        if g not in self._pair:
            self._pair[g] = pair_at(g, self.alpha, self.p)
        return self._pair[g]

    def degree_matrix(self, d: Sequence[int]) -> MonomialMatrix:
        """Operator of the canonical word a_d on M_m, d in G_m."""
        d = tuple(d)
        if d in self._degree:
            return self._degree[d]
        coords = lattice_coordinates(self.basis, d)
        word = ()
        mat = MonomialMatrix.identity(self.dim)
        for s, l, b in zip(self.basis, coords, self.matrices):
            if l >= 0:
                word += canonical_letters(s) * l
                mat = mat @ b ** l
            else:
                word += star(canonical_letters(s)) * (-l)
                mat = mat @ (b.inverse().scale(self.pairing(s))) ** (-l)
        value, _ = _value_on_weight_space(word, self.alpha, self.p)
        if value.is_zero():
            raise DenominatorVanishes("word for degree %s vanishes on M_m" % (d,))
        out = mat.scale(value.inverse())
        self._degree[d] = out
        return out

    def word_matrix(self, w) -> MonomialMatrix:
        value, d = _value_on_weight_space(w, self.alpha, self.p)
        return self.degree_matrix(d).scale(value)
