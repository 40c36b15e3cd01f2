"""Matrices over the coefficient tower.

A matrix over ``R`` is stored as ``sum_k Q_k (x) b_k`` where ``b_k`` runs over
the monomial Q-basis of ``R`` and each ``Q_k`` is a ``QMatrix``.  Because basis
monomials multiply to a single monomial or zero, a product is a sum of
rational matrix products, one per pair of keys whose monomials do not
annihilate.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DescriptorMismatch
from .qmatrix import QMatrix
from .rings import (QQ, Product, Rationals, Ring, RingElement, Truncated, _Graded,
                    element_from_json, element_to_json, invert)


@functools.lru_cache(maxsize=None)
def _lift_key(target: Ring, source: Ring, key) -> tuple:
    comps = target.lift(source.basis_element(key)).components()
    return tuple(comps.items())


def _add_into(acc: dict, key, q: QMatrix) -> None:
    prev = acc.get(key)
    acc[key] = q if prev is None else prev + q


def _prune(comps: dict) -> dict:
    return {k: q for k, q in comps.items() if not q.is_zero()}


class Matrix:
    """Immutable matrix over a ring descriptor."""

    __slots__ = ("ring", "shape", "comps")

    def __init__(self, ring: Ring, shape: tuple[int, int], comps: dict | None = None,
                 *, pruned: bool = False):
        self.ring = ring
        self.shape = tuple(shape)
        comps = comps or {}
        self.comps = comps if pruned else _prune(comps)

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_qmatrix(cls, ring: Ring, q: QMatrix) -> "Matrix":
        """``q`` tensored with the unit of ``ring``."""
        comps = {k: q.scale(c) for k, c in ring.one().components().items()}
        return cls(ring, q.shape, comps)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls.from_qmatrix(ring, QMatrix.identity(n))

    @classmethod
    def zeros(cls, ring: Ring, n: int, m: int | None = None) -> "Matrix":
        return cls(ring, (n, n if m is None else m), {}, pruned=True)

    @classmethod
    def from_entries(cls, ring: Ring, rows: Sequence[Sequence]) -> "Matrix":
        n = len(rows)
        m = len(rows[0]) if n else 0
        per_key: dict = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                for k, c in ring(v).components().items():
                    per_key.setdefault(k, [[0] * m for _ in range(n)])[i][j] = c
        return cls(ring, (n, m), {k: QMatrix.from_rows(r) for k, r in per_key.items()})

    @classmethod
    def column(cls, ring: Ring, values: Iterable) -> "Matrix":
        return cls.from_entries(ring, [[v] for v in values])

    # -- access ------------------------------------------------------------
    def entry(self, i: int, j: int) -> RingElement:
        return self.ring.from_components({k: q[i, j] for k, q in self.comps.items()})

    def entries(self) -> list[list[RingElement]]:
        n, m = self.shape
        return [[self.entry(i, j) for j in range(m)] for i in range(n)]

    def component(self, key) -> QMatrix:
        q = self.comps.get(key)
        return q if q is not None else QMatrix.zeros(*self.shape)

    def as_qmatrix(self) -> QMatrix:
        """The rational matrix, for matrices over Q."""
        if not isinstance(self.ring, Rationals):
            raise DescriptorMismatch(f"matrix over {self.ring} is not rational")
        return self.component(())

    def is_zero(self) -> bool:
        return not self.comps

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.ring, self.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self.comps == other.comps

    def __hash__(self):
        return hash((self.ring, self.shape, frozenset(self.comps.items())))

    def __repr__(self) -> str:
        return f"Matrix({self.ring}, {self.shape}, keys={sorted(self.comps)})"

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "Matrix") -> None:
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        acc = dict(self.comps)
        for k, q in other.comps.items():
            _add_into(acc, k, q)
        return Matrix(self.ring, self.shape, acc)

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, self.shape, {k: -q for k, q in self.comps.items()}, pruned=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ring = self.ring
        acc: dict = {}
        for k1, a in self.comps.items():
            for k2, b in other.comps.items():
                k = ring.key_mul(k1, k2)
                if k is not None:
                    _add_into(acc, k, a @ b)
        return Matrix(ring, (self.shape[0], other.shape[1]), acc)

    def scale(self, r) -> "Matrix":
        """Multiply every entry by the ring element (or rational) ``r``."""
        ring = self.ring
        if not isinstance(r, RingElement):
            r = ring(r)
        elif r.ring != ring:
            r = ring.lift(r)
        acc: dict = {}
        for kr, c in r.components().items():
            for k, q in self.comps.items():
                k2 = ring.key_mul(kr, k)
                if k2 is not None:
                    _add_into(acc, k2, q.scale(c))
        return Matrix(ring, self.shape, acc)

    __mul__ = scale

    def __rmul__(self, r):
        return self.scale(r)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.ring, self.shape[0])
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self) -> RingElement:
        return self.ring.from_components({k: q.trace() for k, q in self.comps.items()})

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.shape[::-1], {k: q.transpose() for k, q in self.comps.items()},
                      pruned=True)

    # -- ring changes ------------------------------------------------------
    def lift(self, target: Ring) -> "Matrix":
        """Embed into a ring built on this one (e.g. Q -> Q[t], Q -> Q^d)."""
        if target == self.ring:
            return self
        acc: dict = {}
        for k, q in self.comps.items():
            for k2, c in _lift_key(target, self.ring, k):
                _add_into(acc, k2, q.scale(c))
        return Matrix(target, self.shape, acc)

    def coefficient(self, j: int) -> "Matrix":
        """Coefficient of ``var^j`` for matrices over a graded ring, as a base matrix."""
        if not isinstance(self.ring, _Graded):
            raise DescriptorMismatch(f"{self.ring} has no variable")
        comps = {k[1:]: q for k, q in self.comps.items() if k[0] == j}
        return Matrix(self.ring.base, self.shape, comps, pruned=True)

    def degree(self) -> int:
        """Largest power of the variable present (-1 for the zero matrix)."""
        return max((k[0] for k in self.comps), default=-1)

    def low_degree(self) -> int | None:
        return min((k[0] for k in self.comps), default=None)

    def substitute(self, value: RingElement) -> "Matrix":
        """Replace the outer variable by ``value``; the result lives in value's ring."""
        if not isinstance(self.ring, _Graded):
            raise DescriptorMismatch(f"{self.ring} has no variable")
        target = value.ring
        base = self.ring.base
        if not target.contains(base):
            raise DescriptorMismatch(f"{base} does not embed in {target}")
        acc = Matrix.zeros(target, *self.shape)
        for j in range(self.degree(), -1, -1):
            acc = acc.scale(value) + self.coefficient(j).lift(target)
        return acc

    def coordinate(self, i: int) -> "Matrix":
        """The ``i``-th factor of a matrix over a product ring."""
        if not isinstance(self.ring, Product):
            raise DescriptorMismatch(f"{self.ring} is not a product")
        comps = {k[1:]: q for k, q in self.comps.items() if k[0] == i}
        return Matrix(self.ring.factor, self.shape, comps, pruned=True)

    @classmethod
    def from_coordinates(cls, ring: Product, parts: Sequence["Matrix"]) -> "Matrix":
        comps = {}
        for i, m in enumerate(parts):
            if m.ring != ring.factor:
                raise DescriptorMismatch(f"{m.ring} is not {ring.factor}")
            for k, q in m.comps.items():
                comps[(i,) + k] = q
        return cls(ring, parts[0].shape, comps, pruned=True)

    def permute_coordinates(self, perm: Sequence[int]) -> "Matrix":
        """Coordinate ``i`` of the result is coordinate ``perm[i]`` of ``self``."""
        return Matrix.from_coordinates(self.ring, [self.coordinate(p) for p in perm])

    # -- determinants and inverses -----------------------------------------
    def charpoly(self) -> list[RingElement]:
        """Coefficients ``c_0..c_n`` of det(x - M), by Faddeev-LeVerrier.

        Only divisions by 1..n occur, which every ring in the tower allows.
        """
        n = self.shape[0]
        ring = self.ring
        ident = Matrix.identity(ring, n)
        coeffs = [ring.zero()] * (n + 1)
        coeffs[n] = ring.one()
        mk = Matrix.zeros(ring, n)
        for k in range(1, n + 1):
            mk = self @ mk + ident.scale(coeffs[n - k + 1])
            coeffs[n - k] = (self @ mk).trace() * Fraction(-1, k)
        return coeffs

    def det(self) -> RingElement:
        if isinstance(self.ring, Rationals):
            return QQ(self.as_qmatrix().det())
        if isinstance(self.ring, Product):
            return self.ring.element(tuple(self.coordinate(i).det().payload
                                           for i in range(self.ring.d)))
        c0 = self.charpoly()[0]
        return c0 if self.shape[0] % 2 == 0 else -c0

    def inverse(self) -> "Matrix":
        """Inverse; raises ``NotAUnit`` when the determinant is not a unit."""
        ring = self.ring
        n = self.shape[0]
        if isinstance(ring, Rationals):
            return Matrix(ring, self.shape, {(): self.as_qmatrix().inverse()})
        if isinstance(ring, Product):
            return Matrix.from_coordinates(ring, [self.coordinate(i).inverse()
                                                  for i in range(ring.d)])
        if isinstance(ring, Truncated):
            m0inv = self.coefficient(0).inverse().lift(ring)
            nil = Matrix.identity(ring, n) - m0inv @ self
            acc = Matrix.identity(ring, n)
            term = acc
            for _ in range(1, ring.order):
                term = term @ nil
                if term.is_zero():
                    break
                acc = acc + term
            return acc @ m0inv
        # polynomial ring: adjugate from the Faddeev-LeVerrier recursion
        ident = Matrix.identity(ring, n)
        coeffs = [ring.zero()] * (n + 1)
        coeffs[n] = ring.one()
        mk = Matrix.zeros(ring, n)
        for k in range(1, n + 1):
            mk = self @ mk + ident.scale(coeffs[n - k + 1])
            coeffs[n - k] = (self @ mk).trace() * Fraction(-1, k)
        return mk.scale(-invert(coeffs[0]))

    # -- serialization -----------------------------------------------------
    def to_json(self) -> list:
        return [[element_to_json(v) for v in row] for row in self.entries()]

    @classmethod
    def from_json(cls, ring: Ring, rows) -> "Matrix":
        return cls.from_entries(ring, [[element_from_json(ring, v) for v in row] for row in rows])
