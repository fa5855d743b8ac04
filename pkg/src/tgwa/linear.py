"""Small exact linear algebra over the Scalar field.

Weight modules here act monomially (each basis vector goes to a multiple of at
most one basis vector), so the workhorse is ``MonomialMatrix``.  Dense
elimination is only needed for the rank computations of the simplicity
fallback.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .errors import DivisionByZero
from .scalars import ONE, ZERO, Scalar, as_scalar

Vector = Dict[Hashable, Scalar]


def vec_add(a: Vector, b: Vector, c=ONE) -> Vector:
    """a + c*b, dropping zero entries."""
    out = dict(a)
    c = as_scalar(c)
    for k, v in b.items():
        s = out.get(k, ZERO) + c * v
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(a: Vector, c) -> Vector:
    c = as_scalar(c)
    if c.is_zero():
        return {}
    return {k: v * c for k, v in a.items()}


class MonomialMatrix:
    """Square matrix with at most one nonzero entry per column.

    ``images[j] = (i, c)`` means e_j -> c e_i; ``None`` means e_j -> 0.
    """

    def __init__(self, images: Sequence[Optional[Tuple[int, Scalar]]]):
        self.images = tuple(None if im is None or as_scalar(im[1]).is_zero()
                            else (im[0], as_scalar(im[1])) for im in images)

    @property
    def size(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "MonomialMatrix":
        return cls([(j, ONE) for j in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "MonomialMatrix":
        return cls([(j, as_scalar(c)) for j, c in enumerate(entries)])

    @classmethod
    def cyclic_shift(cls, n: int, corner) -> "MonomialMatrix":
        """e_j -> e_{j+1} for j < n-1 and e_{n-1} -> corner * e_0."""
        return cls([(j + 1, ONE) for j in range(n - 1)] + [(0, as_scalar(corner))])

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        out = []
        for im in other.images:
            if im is None or self.images[im[0]] is None:
                out.append(None)
            else:
                i, c = self.images[im[0]]
                out.append((i, c * im[1]))
        return MonomialMatrix(out)

    def apply(self, j: int) -> Optional[Tuple[int, Scalar]]:
        return self.images[j]

    def scale(self, c) -> "MonomialMatrix":
        c = as_scalar(c)
        return MonomialMatrix([None if im is None else (im[0], im[1] * c) for im in self.images])

    def is_invertible(self) -> bool:
        targets = [im[0] for im in self.images if im is not None]
        return len(targets) == self.size and len(set(targets)) == self.size

    def inverse(self) -> "MonomialMatrix":
        if not self.is_invertible():
            raise DivisionByZero("monomial matrix is singular")
        out: List[Optional[Tuple[int, Scalar]]] = [None] * self.size
        for j, (i, c) in enumerate(self.images):
            out[i] = (j, c.inverse())
        return MonomialMatrix(out)

    def __pow__(self, k: int) -> "MonomialMatrix":
        base = self if k >= 0 else self.inverse()
        out = MonomialMatrix.identity(self.size)
        for _ in range(abs(k)):
            out = base @ out
        return out

    def is_diagonal(self) -> bool:
        return all(im is not None and im[0] == j for j, im in enumerate(self.images))

    def diagonal_entries(self) -> List[Scalar]:
        return [im[1] if im is not None and im[0] == j else ZERO
                for j, im in enumerate(self.images)]

    def dense(self) -> List[List[Scalar]]:
        n = self.size
        out = [[ZERO] * n for _ in range(n)]
        for j, im in enumerate(self.images):
            if im is not None:
                out[im[0]][j] = im[1]
        return out

    def __eq__(self, other):
        return isinstance(other, MonomialMatrix) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "MonomialMatrix(%r)" % (self.images,)


def dense_mul(a, b):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(m) if not a[i][k].is_zero()
                  and not b[k][j].is_zero()), ZERO) for j in range(p)] for i in range(n)]


class RowSpace:
    """Incrementally maintained echelon basis of a space of vectors."""

    def __init__(self):
        self.rows: List[Tuple[int, List[Scalar]]] = []

    def reduce(self, v: Sequence[Scalar]) -> List[Scalar]:
        v = list(v)
        for pivot, row in self.rows:
            c = v[pivot]
            if not c.is_zero():
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, v: Sequence[Scalar]) -> bool:
        """Insert v; True if it was independent of the current rows."""
        v = self.reduce(v)
        for k, x in enumerate(v):
            if not x.is_zero():
                inv = x.inverse()
                v = [y * inv for y in v]
                new_rows = []
                for pivot, row in self.rows:
                    c = row[k]
                    if not c.is_zero():
                        row = [a - c * b for a, b in zip(row, v)]
                    new_rows.append((pivot, row))
                self.rows = new_rows + [(k, v)]
                return True
        return False

    @property
    def dim(self) -> int:
        return len(self.rows)


def rank(vectors: Sequence[Sequence[Scalar]]) -> int:
    space = RowSpace()
    for v in vectors:
        space.add(v)
    return space.dim
