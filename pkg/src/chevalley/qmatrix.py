"""Exact rational matrices stored as an integer array over one denominator.

Python ``Fraction`` arithmetic is slow because every operation reduces by a
gcd.  Here a matrix is ``num / den`` with ``num`` a numpy object array of
Python ints, so products run through numpy's object loops on plain integers
and a single gcd normalises the result.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NotAUnit

# products whose entries provably stay below these bounds are done in machine
# arithmetic; every partial sum is an integer below the bound, so both are exact
INT64_SAFE = 2 ** 62
FLOAT64_SAFE = 2 ** 53


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return max(abs(int(a.max())), abs(int(a.min())))


def int_dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer matrix product, in int64 when no overflow is possible."""
    bound = _max_abs(a) * _max_abs(b) * max(a.shape[1], 1)
    if bound < FLOAT64_SAFE:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return prod.astype(np.int64).astype(object)
    if bound < INT64_SAFE:
        return (a.astype(np.int64) @ b.astype(np.int64)).astype(object)
    return a.dot(b)


def _int_array(rows, shape=None) -> np.ndarray:
    arr = np.empty(shape if shape is not None else (len(rows), len(rows[0]) if rows else 0),
                   dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            arr[i, j] = int(v)
    return arr


class QMatrix:
    """Immutable rational matrix ``num / den`` in lowest terms (den > 0)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: np.ndarray, den: int = 1, *, normalized: bool = False):
        if num.dtype != object:
            num = num.astype(object)
        if not normalized:
            if den < 0:
                num, den = -num, -den
            if den != 1:
                g = math.gcd(den, *num.ravel().tolist())
                if g > 1:
                    num = num // g
                    den //= g
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        fr = [[Fraction(v) for v in row] for row in rows]
        n = len(fr)
        m = len(fr[0]) if n else 0
        den = math.lcm(1, *(v.denominator for row in fr for v in row))
        num = np.empty((n, m), dtype=object)
        for i, row in enumerate(fr):
            for j, v in enumerate(row):
                num[i, j] = v.numerator * (den // v.denominator)
        return cls(num, den)

    @classmethod
    def from_ints(cls, rows) -> "QMatrix":
        return cls(_int_array(rows), 1, normalized=True)

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "QMatrix":
        m = n if m is None else m
        num = np.empty((n, m), dtype=object)
        num.fill(0)
        return cls(num, 1, normalized=True)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        q = cls.zeros(n)
        for i in range(n):
            q.num[i, i] = 1
        return q

    @classmethod
    def column(cls, values: Iterable) -> "QMatrix":
        return cls.from_rows([[v] for v in values])

    # -- basics ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(self.num[i, j], self.den)

    def rows(self) -> list[list[Fraction]]:
        d = self.den
        return [[Fraction(v, d) for v in row] for row in self.num.tolist()]

    def is_zero(self) -> bool:
        return not any(self.num.ravel().tolist())

    def is_identity(self) -> bool:
        n, m = self.shape
        return n == m and self.den == 1 and self == QMatrix.identity(n)

    def nonzero_count(self) -> int:
        return sum(1 for v in self.num.ravel().tolist() if v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.den == other.den
                and self.num.ravel().tolist() == other.num.ravel().tolist())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.den, tuple(self.num.ravel().tolist())))
        return self._hash

    def __repr__(self) -> str:
        return f"QMatrix({self.rows()!r})"

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.den == other.den:
            return QMatrix(self.num + other.num, self.den)
        l = math.lcm(self.den, other.den)
        return QMatrix(self.num * (l // self.den) + other.num * (l // other.den), l)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.num, self.den, normalized=True)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(int_dot(self.num, other.num), self.den * other.den)

    def scale(self, q) -> "QMatrix":
        q = Fraction(q)
        if q == 1:
            return self
        return QMatrix(self.num * q.numerator, self.den * q.denominator)

    def __pow__(self, k: int) -> "QMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = QMatrix.identity(self.shape[0])
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "QMatrix":
        return QMatrix(self.num.T.copy(), self.den, normalized=True)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "QMatrix":
        return QMatrix(self.num[r0:r1, c0:c1].copy(), self.den)

    def trace(self) -> Fraction:
        return Fraction(sum(self.num.diagonal().tolist()), self.den)

    # -- elimination -------------------------------------------------------
    def rref(self) -> tuple[list[list[Fraction]], list[int]]:
        """Reduced row echelon form and pivot columns."""
        m = self.rows()
        n_rows, n_cols = self.shape
        pivots = []
        r = 0
        for c in range(n_cols):
            p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
            if p is None:
                continue
            m[r], m[p] = m[p], m[r]
            inv = 1 / m[r][c]
            m[r] = [v * inv for v in m[r]]
            for i in range(n_rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == n_rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        """Determinant by fraction-free (Bareiss) elimination on the numerator."""
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        a = self.num.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if p is None:
                    return Fraction(0)
                a[k], a[p] = a[p], a[k]
                sign = -sign
            akk = a[k][k]
            rowk = a[k]
            for i in range(k + 1, n):
                aik = a[i][k]
                rowi = a[i]
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
                rowi[k] = 0
            prev = akk
        return Fraction(sign * a[n - 1][n - 1] if n else 1, self.den ** n)

    def inverse(self) -> "QMatrix":
        """Gauss-Jordan inverse; raises ``NotAUnit`` when singular."""
        n, m = self.shape
        if n != m:
            raise ValueError("inverse of a non-square matrix")
        # invert the numerator, then rescale by the denominator
        a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.num.tolist())]
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c] != 0), None)
            if p is None:
                raise NotAUnit("singular matrix")
            a[c], a[p] = a[p], a[c]
            inv = 1 / a[c][c]
            row = [v * inv if v else v for v in a[c]]
            a[c] = row
            nz = [j for j, v in enumerate(row) if v]
            for i in range(n):
                f = a[i][c]
                if i != c and f:
                    ri = a[i]
                    for j in nz:
                        ri[j] -= f * row[j]
        inv_rows = [row[n:] for row in a]
        return QMatrix.from_rows(inv_rows).scale(self.den)

    def solve_right(self, b: "QMatrix") -> "QMatrix | None":
        """A solution ``x`` of ``self @ x == b``, or None when inconsistent."""
        n, m = self.shape
        aug_rows = [r + s for r, s in zip(self.rows(), b.rows())]
        aug = QMatrix.from_rows(aug_rows)
        red, piv = aug.rref()
        k = b.shape[1]
        if any(p >= m for p in piv):
            return None
        x = [[Fraction(0)] * k for _ in range(m)]
        for r, p in enumerate(piv):
            x[p] = red[r][m:]
        return QMatrix.from_rows(x)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.rows()]

    @classmethod
    def from_json(cls, rows) -> "QMatrix":
        return cls.from_rows([[Fraction(str(v)) for v in row] for row in rows])


def hstack(blocks: Sequence[QMatrix]) -> QMatrix:
    l = math.lcm(*(b.den for b in blocks))
    return QMatrix(np.hstack([b.num * (l // b.den) for b in blocks]), l)


def vstack(blocks: Sequence[QMatrix]) -> QMatrix:
    l = math.lcm(*(b.den for b in blocks))
    return QMatrix(np.vstack([b.num * (l // b.den) for b in blocks]), l)


def block_diag(blocks: Sequence[QMatrix]) -> QMatrix:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    l = math.lcm(*(b.den for b in blocks))
    num = np.empty((n, m), dtype=object)
    num.fill(0)
    r = c = 0
    for b in blocks:
        bn, bm = b.shape
        num[r:r + bn, c:c + bm] = b.num * (l // b.den)
        r += bn
        c += bm
    return QMatrix(num, l)
