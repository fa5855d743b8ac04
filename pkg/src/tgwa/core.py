"""Twisted generalized Weyl algebra presentations and word arithmetic.

Elements of the base ring R = K[t_1, ..., t_n] are represented as scalars in
the reserved variables ``t1, ..., tn`` (see :func:`t_var`), so evaluation at a
weight point is ordinary substitution.  The automorphisms sigma_i are affine
maps on the t-generators.

Words are tuples of letters ``('X', i)`` / ``('Y', i)`` with 1-based i.  For
presentations in which X_i X_j = c_ij X_j X_i holds in the algebra (the
quantized Weyl algebras and the Q_ij-CCR algebras) every word normalizes to
coeff * Z_1^{g_1} ... Z_n^{g_n} * r(t), where Z_j^k = X_j^k for k >= 0 and
Y_j^{-k} for k < 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NotScalarGraded
from .scalars import ONE, ZERO, ParameterEnv, Poly, Scalar, as_scalar, format_scalar, substitute

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]


def t_var(i: int) -> Scalar:
    return Scalar.param("t%d" % i)


def t_names(n: int) -> List[str]:
    return ["t%d" % i for i in range(1, n + 1)]


# ---------------------------------------------------------------------------
# affine maps on the t-generators


def _linear_form(s: Scalar, n: int):
    """Split s = sum_k a_k t_k + b with t-free a_k, b; None if not affine."""
    names = set(t_names(n))
    if s.den.variables() & names:
        return None
    coeffs: Dict[str, Dict] = {}
    for mono, c in s.num.terms.items():
        tpart = [(v, e) for v, e in mono if v in names]
        rest = tuple((v, e) for v, e in mono if v not in names)
        if len(tpart) > 1 or (tpart and tpart[0][1] != 1):
            return None
        key = tpart[0][0] if tpart else ""
        coeffs.setdefault(key, {})[rest] = c
    lin = []
    for i in range(1, n + 1):
        terms = coeffs.get("t%d" % i)
        lin.append(Scalar.from_parts(Poly(terms), s.den) if terms else ZERO)
    const = coeffs.get("")
    return lin, (Scalar.from_parts(Poly(const), s.den) if const else ZERO)


@dataclass(frozen=True)
class AffineMap:
    """t_j -> sum_k M[j][k] t_k + v[j]."""

    M: Tuple[Tuple[Scalar, ...], ...]
    v: Tuple[Scalar, ...]

    @property
    def n(self) -> int:
        return len(self.v)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)),
                   tuple(ZERO for _ in range(n)))

    @classmethod
    def from_images(cls, images: Sequence, n: int) -> "AffineMap":
        rows, consts = [], []
        for j, img in enumerate(images):
            form = _linear_form(as_scalar(img), n)
            if form is None:
                raise ValueError("sigma(t%d) = %s is not affine in the t-generators" % (j + 1, img))
            rows.append(tuple(form[0]))
            consts.append(form[1])
        return cls(tuple(rows), tuple(consts))

    def images(self) -> List[Scalar]:
        out = []
        for j in range(self.n):
            s = self.v[j]
            for k in range(self.n):
                if not self.M[j][k].is_zero():
                    s = s + self.M[j][k] * t_var(k + 1)
            out.append(s)
        return out

    def compose(self, other: "AffineMap") -> "AffineMap":
        """The automorphism self o other (apply other first, as maps of R)."""
        # self(other(t_j)) = sum_k Mo[j][k] self(t_k) + vo[j]
        n = self.n
        M = tuple(tuple(sum((other.M[j][k] * self.M[k][l] for k in range(n)), ZERO)
                        for l in range(n)) for j in range(n))
        v = tuple(sum((other.M[j][k] * self.v[k] for k in range(n)), ZERO) + other.v[j]
                  for j in range(n))
        return AffineMap(M, v)

    def inverse(self) -> "AffineMap":
        n = self.n
        aug = [list(self.M[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if not aug[r][c].is_zero()), None)
            if piv is None:
                raise ValueError("affine map is not invertible")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = aug[c][c].inverse()
            aug[c] = [x * inv for x in aug[c]]
            for r in range(n):
                if r != c and not aug[r][c].is_zero():
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        Minv = tuple(tuple(row[n:]) for row in aug)
        v = tuple(-sum((Minv[j][k] * self.v[k] for k in range(n)), ZERO) for j in range(n))
        return AffineMap(Minv, v)

    def apply(self, r) -> Scalar:
        r = as_scalar(r)
        if r.is_constant():
            return r
        return substitute(r, dict(zip(t_names(self.n), self.images())))

    def __eq__(self, other):
        return isinstance(other, AffineMap) and self.M == other.M and self.v == other.v

    def __hash__(self):
        return hash((self.M, self.v))


# ---------------------------------------------------------------------------
# presentations


class TgwaPresentation:
    """Data (sigma, t, mu) of a twisted generalized Weyl construction over
    K[t_1..t_n], plus optional constants c_ij with X_i X_j = c_ij X_j X_i in
    the algebra."""

    def __init__(self, n: int, sigma: Sequence[AffineMap], t: Sequence, mu,
                 x_commutation=None, name: str = "custom", env: Optional[ParameterEnv] = None):
        self.n = n
        self.sigma = tuple(sigma)
        self.t = tuple(as_scalar(x) for x in t)
        self.mu = tuple(tuple(as_scalar(x) for x in row) for row in mu)
        self.x_commutation = (None if x_commutation is None else
                              tuple(tuple(as_scalar(x) for x in row) for row in x_commutation))
        self.name = name
        self.env = env or ParameterEnv()
        if len(self.sigma) != n or len(self.t) != n:
            raise ValueError("need n sigma maps and n t-elements")
        self._sigma_inv = tuple(s.inverse() for s in self.sigma)
        self._power_cache: Dict[Tuple[int, ...], AffineMap] = {}
        self._y_commutation = None

    # automorphisms ----------------------------------------------------------
    def sigma_power(self, g: Sequence[int]) -> AffineMap:
        """The automorphism g = sigma_1^{g_1} ... sigma_n^{g_n} of R."""
        g = tuple(g)
        if g not in self._power_cache:
            f = AffineMap.identity(self.n)
            for i, k in enumerate(g):
                step = self.sigma[i] if k > 0 else self._sigma_inv[i]
                for _ in range(abs(k)):
                    f = f.compose(step)
            self._power_cache[g] = f
        return self._power_cache[g]

    def act(self, g: Sequence[int], r) -> Scalar:
        if not any(g):
            return as_scalar(r)
        return self.sigma_power(g).apply(r)

    def sigma_i(self, i: int, r, power: int = 1) -> Scalar:
        g = [0] * self.n
        g[i - 1] = power
        return self.act(g, r)

    # commutation constants ----------------------------------------------------
    def scalar_graded(self) -> bool:
        return self.x_commutation is not None

    def y_commutation(self):
        """d_ij with Y_i Y_j = d_ij Y_j Y_i, derived from the c_ij."""
        if self.x_commutation is None:
            raise NotScalarGraded("presentation has no X-commutation constants")
        if self._y_commutation is None:
            n = self.n
            d = [[ONE] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    if i != j:
                        num = self.x_commutation[i][j] * self.sigma_i(i + 1, self.t[j], -1) * self.t[i]
                        den = self.sigma_i(j + 1, self.t[i], -1) * self.t[j]
                        ratio = num / den
                        if ratio.variables() & set(t_names(n)):
                            raise NotScalarGraded("Y_%d Y_%d is not a scalar multiple of Y_%d Y_%d"
                                                  % (i + 1, j + 1, j + 1, i + 1))
                        d[i][j] = ratio
            self._y_commutation = tuple(tuple(r) for r in d)
        return self._y_commutation

    def swap_scalar(self, left: Letter, right: Letter) -> Scalar:
        """s with left * right = s * right * left (different indices)."""
        (a, k), (b, i) = left, right
        if k == i:
            raise ValueError("letters share an index")
        if a == "X" and b == "Y":
            return self.mu[k - 1][i - 1]
        if a == "Y" and b == "X":
            return self.mu[i - 1][k - 1].inverse()
        if self.x_commutation is None:
            raise NotScalarGraded("X_%d and X_%d do not commute up to a scalar" % (k, i))
        if a == "X":
            return self.x_commutation[k - 1][i - 1]
        return self.y_commutation()[k - 1][i - 1]

    def sigma_t(self, i: int) -> Scalar:
        return self.sigma_i(i, self.t[i - 1])

    def __repr__(self):
        return "TgwaPresentation(%s, n=%d)" % (self.name, self.n)


def qwa_presentation(n: int, env: Optional[ParameterEnv] = None) -> TgwaPresentation:
    """The rank-n quantized Weyl algebra."""
    env = env or ParameterEnv()
    q = [env.q(i) for i in range(1, n + 1)]
    t = [t_var(i) for i in range(1, n + 1)]
    sigma = []
    for i in range(1, n + 1):
        images = []
        for j in range(1, n + 1):
            if j < i:
                images.append(t[j - 1])
            elif j == i:
                s = 1 + q[i - 1] * t[i - 1]
                for k in range(1, i):
                    s = s + (q[k - 1] - 1) * t[k - 1]
                images.append(s)
            else:
                images.append(q[i - 1] * t[j - 1])
        sigma.append(AffineMap.from_images(images, n))
    mu = env.qwa_mu(n)
    c = [[ONE] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c[i][j] = q[i] * env.lam(i + 1, j + 1)
            c[j][i] = c[i][j].inverse()
    return TgwaPresentation(n, sigma, t, mu, c, name="qwa%d" % n, env=env)


def ccr_presentation(n: int, env: Optional[ParameterEnv] = None) -> TgwaPresentation:
    """The Q_ij-CCR algebra: sigma_i(t_i) = 1 + Q_ii t_i, mu_ij = Q_ji.

    Parameters are named ``Q11``, ``Q12``, ...; Q_ji is the inverse of Q_ij.
    """
    env = env or ParameterEnv()

    def Q(i, j):
        if i == j or i < j:
            return env.value("Q%d%d" % (i, j))
        return env.value("Q%d%d" % (j, i)).inverse()

    t = [t_var(i) for i in range(1, n + 1)]
    sigma = []
    for i in range(1, n + 1):
        images = [1 + Q(i, i) * t[j - 1] if j == i else t[j - 1] for j in range(1, n + 1)]
        sigma.append(AffineMap.from_images(images, n))
    mu = [[ONE if i == j else Q(j, i) for j in range(1, n + 1)] for i in range(1, n + 1)]
    # X_i X_j t_i = mu_ji X_j X_i sigma_j^{-1}(t_i) with sigma_j^{-1}(t_i) = t_i
    c = [[ONE if i == j else mu[j - 1][i - 1] for j in range(1, n + 1)] for i in range(1, n + 1)]
    return TgwaPresentation(n, sigma, t, mu, c, name="ccr%d" % n, env=env)


def sign_flip_presentation() -> TgwaPresentation:
    """Rank two, sigma_i(t_j) = -t_j, mu = [[0, 1], [1, 0]]; here X_1 X_2 = -X_2 X_1."""
    t = [t_var(1), t_var(2)]
    flip = AffineMap.from_images([-t[0], -t[1]], 2)
    return TgwaPresentation(2, [flip, flip], t, [[ZERO, ONE], [ONE, ZERO]],
                            [[ONE, Scalar(-1)], [Scalar(-1), ONE]], name="signflip")


@dataclass
class ConsistencyReport:
    failures: List[Tuple[int, int, str]]

    @property
    def ok(self) -> bool:
        return not self.failures


def check_consistency(p: TgwaPresentation) -> ConsistencyReport:
    """Commutation of the sigma_i and t_i t_j = mu_ij mu_ji sigma_i^-1(t_j) sigma_j^-1(t_i)."""
    failures = []
    n = p.n
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            a, b = p.sigma[i - 1], p.sigma[j - 1]
            if a.compose(b) != b.compose(a):
                failures.append((i, j, "sigma_commute"))
            lhs = p.t[i - 1] * p.t[j - 1]
            rhs = (p.mu[i - 1][j - 1] * p.mu[j - 1][i - 1] * p.sigma_i(i, p.t[j - 1], -1)
                   * p.sigma_i(j, p.t[i - 1], -1))
            if lhs != rhs:
                failures.append((i, j, "t_identity"))
    return ConsistencyReport(failures)


# ---------------------------------------------------------------------------
# words


def parse_word(text: str) -> Word:
    out = []
    for tok in text.replace("*", " ").split():
        if len(tok) < 2 or tok[0] not in "XY" or not tok[1:].isdigit():
            raise ValueError("bad letter %r" % tok)
        out.append((tok[0], int(tok[1:])))
    return tuple(out)


def format_word(w: Word) -> str:
    return " ".join("%s%d" % l for l in w)


def star(w: Word) -> Word:
    """Reverse the word and exchange X_i with Y_i."""
    return tuple(("Y" if a == "X" else "X", i) for a, i in reversed(w))


def degree(w: Word, n: int) -> Tuple[int, ...]:
    g = [0] * n
    for a, i in w:
        g[i - 1] += 1 if a == "X" else -1
    return tuple(g)


def _unit(n: int, i: int, sign: int = 1) -> Tuple[int, ...]:
    return tuple(sign if k == i - 1 else 0 for k in range(n))


def _neg(g):
    return tuple(-x for x in g)


def _add(g, h):
    return tuple(a + b for a, b in zip(g, h))


def reduce_word(w: Word, p: TgwaPresentation):
    """Write w = coeff * a * r with a reduced (Y's then X's, no index both
    as X and Y), using only the defining relations of the construction.
    Returns (a, r, coeff)."""
    n = p.n
    ys: List[int] = []
    xs: List[int] = []
    r, coeff = ONE, ONE
    for kind, j in w:
        # move the accumulated ring element to the right of the new letter
        r = p.act(_unit(n, j, -1 if kind == "X" else 1), r)
        if kind == "Y":
            if j not in xs:
                for i in xs:
                    coeff = coeff * p.mu[i - 1][j - 1]
                ys.append(j)
                continue
            v = len(xs) - 1 - xs[::-1].index(j)
            post = xs[v + 1:]
            for i in post:
                coeff = coeff * p.mu[i - 1][j - 1]
            h = [0] * n
            for i in post:
                h[i - 1] -= 1
            r = p.act(h, p.sigma_t(j)) * r
            del xs[v]
        else:
            if j not in ys:
                xs.append(j)
                continue
            u = len(ys) - 1 - ys[::-1].index(j)
            suffix = ys[u + 1:]
            for i in xs:
                coeff = coeff / p.mu[i - 1][j - 1]
            for s in suffix:
                coeff = coeff / p.mu[j - 1][s - 1]
            h = [0] * n
            for s in suffix:
                h[s - 1] += 1
            r = p.act(h, p.t[j - 1]) * r
            del ys[u]
    return tuple(("Y", i) for i in ys) + tuple(("X", i) for i in xs), r, coeff


@dataclass(frozen=True)
class CanonicalWord:
    """coeff * Z_1^{g_1} ... Z_n^{g_n} * r_factor."""

    coeff: Scalar
    degree: Tuple[int, ...]
    r_factor: Scalar

    def to_json(self, N: Optional[int] = None):
        return {"coeff": format_scalar(self.coeff, N), "degree": list(self.degree),
                "r_factor": format_scalar(self.r_factor, N)}

    def normalized(self) -> "CanonicalWord":
        """Move the leading coefficient of r_factor into coeff."""
        r = self.r_factor
        if r.is_zero():
            return CanonicalWord(ZERO, self.degree, ZERO)
        lc = Scalar(r.num.leading()[1])
        if lc.is_one():
            return self
        return CanonicalWord(self.coeff * lc, self.degree, r / lc)


def canonical_letters(g: Sequence[int]) -> Word:
    """The word Z_1^{g_1} ... Z_n^{g_n}."""
    out = []
    for i, k in enumerate(g, start=1):
        out.extend([("X" if k > 0 else "Y", i)] * abs(k))
    return tuple(out)


def _mul_letter(cw: CanonicalWord, letter: Letter, p: TgwaPresentation) -> CanonicalWord:
    n = p.n
    kind, i = letter
    step = _unit(n, i, 1 if kind == "X" else -1)
    r = p.act(_neg(step), cw.r_factor)
    coeff = cw.coeff
    g = list(cw.degree)
    # pass the letter leftwards through Z_{i+1}^{g_{i+1}} ... Z_n^{g_n}
    h = [0] * n
    for k in range(i + 1, n + 1):
        m = g[k - 1]
        if m:
            s = p.swap_scalar(("X" if m > 0 else "Y", k), letter)
            coeff = coeff * s ** abs(m)
            h[k - 1] = m
    m = g[i - 1]
    if (kind == "X" and m < 0) or (kind == "Y" and m > 0):
        middle = p.t[i - 1] if kind == "X" else p.sigma_t(i)
        r = p.act(_neg(h), middle) * r
    g[i - 1] = m + (1 if kind == "X" else -1)
    return CanonicalWord(coeff, tuple(g), r)


def normalize(w: Word, p: TgwaPresentation) -> CanonicalWord:
    """Canonical form of a word in the algebra (scalar-graded presentations)."""
    if not p.scalar_graded():
        raise NotScalarGraded("normalization needs X-commutation constants")
    cw = CanonicalWord(ONE, tuple([0] * p.n), ONE)
    for letter in w:
        cw = _mul_letter(cw, letter, p)
    return cw.normalized()


def multiply(a: CanonicalWord, b: CanonicalWord, p: TgwaPresentation) -> CanonicalWord:
    """Product of two canonical words, again in canonical form."""
    cw = a
    for letter in canonical_letters(b.degree):
        cw = _mul_letter(cw, letter, p)
    return CanonicalWord(cw.coeff * b.coeff, cw.degree, cw.r_factor * b.r_factor).normalized()


def evaluate_r(r, alpha: Sequence[Scalar]) -> Scalar:
    """Value of a ring element at the point t = alpha."""
    return substitute(as_scalar(r), dict(zip(t_names(len(alpha)), alpha)))


def pair_at(g: Sequence[int], alpha: Sequence[Scalar], p: TgwaPresentation) -> Scalar:
    """Value of a_g^* a_g at the point alpha, a_g = Z_1^{g_1} ... Z_n^{g_n}."""
    a = canonical_letters(g)
    cw = normalize(star(a) + a, p)
    return cw.coeff * evaluate_r(cw.r_factor, alpha)
