"""Integer lattice algorithms.

Row Hermite normal form, intersections, kernels of maps into
(Z/N)^p + Z^m, the skew normal form of skew-symmetric integer matrices, and
the coset transversal {0..d1-1} x {0..d2-1} of Z^2 modulo a rank-two
sublattice.  Matrices are lists of integer rows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DegenerateBasis, NotSkewSymmetric

IntMatrix = List[List[int]]


def _hnf_with_transform(rows: Sequence[Sequence[int]], ncols: int):
    """Row-reduce; returns (H, T) with H = T * rows, zero rows kept at the end."""
    a = [list(r) for r in rows]
    m = len(a)
    t = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            t[r], t[piv] = t[piv], t[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c]:
                    f = a[i][c] // a[r][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                    t[i] = [x - f * y for x, y in zip(t[i], t[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < m and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                t[r] = [-x for x in t[r]]
            for i in range(r):
                f = a[i][c] // a[r][c]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                    t[i] = [x - f * y for x, y in zip(t[i], t[r])]
            r += 1
    return a, t, r


@dataclass(frozen=True)
class Lattice:
    """Subgroup of Z^n with a row Hermite normal form basis."""

    ambient_rank: int
    basis: Tuple[Tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[int]) -> bool:
        v = list(v)
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x)
            if v[c] % row[c]:
                return False
            f = v[c] // row[c]
            v = [x - f * y for x, y in zip(v, row)]
        return not any(v)

    def is_full(self) -> bool:
        return self == full_lattice(self.ambient_rank)

    def to_json(self):
        return [list(r) for r in self.basis]

    def __str__(self):
        if not self.basis:
            return "0"
        return "<" + ", ".join(str(tuple(r)) for r in self.basis) + ">"


def hnf(generators: Sequence[Sequence[int]], ambient_rank: Optional[int] = None) -> Lattice:
    """Lattice spanned by the generator rows, in row Hermite normal form."""
    generators = [list(r) for r in generators]
    n = ambient_rank if ambient_rank is not None else (len(generators[0]) if generators else 0)
    if any(len(r) != n for r in generators):
        raise ValueError("rows must have length %d" % n)
    h, _, r = _hnf_with_transform(generators, n)
    return Lattice(n, tuple(tuple(row) for row in h[:r]))


def full_lattice(n: int) -> Lattice:
    return Lattice(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def zero_lattice(n: int) -> Lattice:
    return Lattice(n, ())


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Basis of {u : u * rows = 0} over Z."""
    _, t, r = _hnf_with_transform(rows, ncols)
    return [row for row in t[r:]]


def intersect(a: Lattice, b: Lattice) -> Lattice:
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("ambient ranks differ")
    n = a.ambient_rank
    if not a.basis or not b.basis:
        return zero_lattice(n)
    stacked = [list(r) for r in a.basis] + [[-x for x in r] for r in b.basis]
    kernel = left_kernel(stacked, n)
    gens = []
    for u in kernel:
        gens.append([sum(u[i] * a.basis[i][c] for i in range(a.rank)) for c in range(n)])
    return hnf(gens, n)


def kernel_of_unit_map(torsion_rows: Sequence[Sequence[int]], N: int,
                       free_rows: Sequence[Sequence[int]], n: Optional[int] = None) -> Lattice:
    """{g in Z^n : torsion_rows * g = 0 mod N and free_rows * g = 0}."""
    torsion_rows = [list(r) for r in torsion_rows]
    free_rows = [list(r) for r in free_rows]
    if n is None:
        n = len((torsion_rows + free_rows)[0])
    p, m = len(torsion_rows), len(free_rows)
    if p + m == 0:
        return full_lattice(n)
    # left kernel of the n + p rows (columns: torsion images, then free images)
    rows = []
    for i in range(n):
        rows.append([t[i] for t in torsion_rows] + [f[i] for f in free_rows])
    for k in range(p):
        rows.append([N * int(k == j) for j in range(p)] + [0] * m)
    kernel = left_kernel(rows, p + m)
    return hnf([u[:n] for u in kernel], n)


# ---------------------------------------------------------------------------
# skew normal form


@dataclass(frozen=True)
class SkewNormalForm:
    U: Tuple[Tuple[int, ...], ...]
    thetas: Tuple[int, ...]
    laurent_rank: int

    def block_matrix(self) -> IntMatrix:
        k = len(self.U)
        out = [[0] * k for _ in range(k)]
        for i, th in enumerate(self.thetas):
            out[2 * i][2 * i + 1] = th
            out[2 * i + 1][2 * i] = -th
        return out


def mat_mul(a, b) -> IntMatrix:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a) -> IntMatrix:
    return [list(r) for r in zip(*a)]


def determinant(a) -> int:
    """Integer determinant by fraction-free elimination (Bareiss)."""
    m = [list(r) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def skew_normal_form(theta: Sequence[Sequence[int]]) -> SkewNormalForm:
    """Find unimodular U with U^T theta U block diagonal [[0, t_i], [-t_i, 0]]."""
    k = len(theta)
    t = [list(r) for r in theta]
    for i in range(k):
        if len(t[i]) != k:
            raise NotSkewSymmetric("matrix is not square")
        for j in range(k):
            if t[i][j] != -t[j][i]:
                raise NotSkewSymmetric("entry (%d,%d) breaks skew symmetry" % (i, j))
    u = [[int(i == j) for j in range(k)] for i in range(k)]

    def add(l, m, c):
        # basis change e_l <- e_l + c e_m
        for row in u:
            row[l] += c * row[m]
        t[l] = [x + c * y for x, y in zip(t[l], t[m])]
        for row in t:
            row[l] += c * row[m]

    def swap(l, m):
        if l == m:
            return
        for row in u:
            row[l], row[m] = row[m], row[l]
        t[l], t[m] = t[m], t[l]
        for row in t:
            row[l], row[m] = row[m], row[l]

    thetas = []
    p = 0
    while p + 1 < k:
        while True:
            entries = [(abs(t[i][j]), i, j) for i in range(p, k) for j in range(i + 1, k) if t[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap(p, i)
            swap(p + 1, j if j != p else i)
            if t[p][p + 1] < 0:
                swap(p, p + 1)
            a = t[p][p + 1]
            for l in range(p + 2, k):
                f = t[p][l] // a
                if f:
                    add(l, p + 1, -f)
                f = t[p + 1][l] // a
                if f:
                    add(l, p, f)
            if any(t[p][l] or t[p + 1][l] for l in range(p + 2, k)):
                continue
            bad = [(i2, j2) for i2 in range(p + 2, k) for j2 in range(p + 2, k) if t[i2][j2] % a]
            if bad:
                add(p, bad[0][0], 1)
                continue
            break
        if not any(t[i][j] for i in range(p, k) for j in range(p, k)):
            break
        thetas.append(t[p][p + 1])
        p += 2
    return SkewNormalForm(tuple(tuple(r) for r in u), tuple(thetas), k - 2 * len(thetas))


# ---------------------------------------------------------------------------
# rank-two coset representatives


@dataclass(frozen=True)
class BoxReps:
    d1: int
    d2: int
    s: int
    a2p: int
    b2p: int

    def box(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(self.d1) for j in range(self.d2)]


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def box_reps(a: Sequence[int], b: Sequence[int]) -> BoxReps:
    a1, a2 = a
    b1, b2 = b
    d = a1 * b2 - b1 * a2
    if d == 0:
        raise DegenerateBasis("basis vectors %s, %s are dependent" % (tuple(a), tuple(b)))
    if a1 < 0 or b1 < 0 or d < 0:
        raise ValueError("basis must satisfy a1, b1 >= 0 and a1*b2 - b1*a2 > 0")
    d2, a2p, b2p = ext_gcd(a2, b2)
    d1 = d // d2
    s0 = -a2p * a1 - b2p * b1
    # shifting (a2', b2') by p (b2/d2, -a2/d2) lowers s by p d1
    p = s0 // d1
    a2p, b2p = a2p + p * (b2 // d2), b2p - p * (a2 // d2)
    s = -a2p * a1 - b2p * b1
    return BoxReps(d1, d2, s, a2p, b2p)


def reduce_mod_basis(g: Sequence[int], a: Sequence[int], b: Sequence[int]):
    """Write g = v + x a + y b with v in the box; returns (v, (x, y))."""
    reps = box_reps(a, b)
    a1, a2 = a
    b1, b2 = b
    d = a1 * b2 - b1 * a2
    g1, g2 = g
    # solve x a + y b = g - v over the rationals, v determined by congruences
    for v in reps.box():
        r1, r2 = g1 - v[0], g2 - v[1]
        xn = r1 * b2 - b1 * r2
        yn = a1 * r2 - a2 * r1
        if xn % d == 0 and yn % d == 0:
            return v, (xn // d, yn // d)
    raise AssertionError("box is not a transversal")  # pragma: no cover


def normalize_rank2_basis(lat: Lattice) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Basis (a, b) of a rank-two sublattice of Z^2 with a1, b1 >= 0 and
    a1 b2 - b1 a2 > 0; the lexicographically smallest such choice among sign
    changes and the swap of the Hermite basis rows."""
    if lat.ambient_rank != 2 or lat.rank != 2:
        raise DegenerateBasis("need a rank-two sublattice of Z^2")
    h1, h2 = lat.basis
    candidates = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        u = tuple(s1 * x for x in h1)
        v = tuple(s2 * x for x in h2)
        for a, b in ((u, v), (v, u)):
            if a[0] >= 0 and b[0] >= 0 and a[0] * b[1] - b[0] * a[1] > 0:
                candidates.append((a, b))
    return min(candidates)
