"""Chevalley basis, structure constants and the Lie bracket of L(Phi, R).

The basis is ordered ``h_1..h_l`` followed by ``x_a`` for ``a`` in
``RootSystem.roots`` (positive roots by height, then their negatives).

Structure constants follow the extraspecial-pair convention: for each
non-simple positive root ``g`` the pair ``(a, b)``, ``a + b = g``, with ``a``
minimal in the root order gets ``N_{a,b} = +(p + 1)``.  Every other constant
is forced by Jacobi and the normalisation ``[x_a, x_{-a}] = h_a``,
``N_{-a,-b} = -N_{a,b}``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import DescriptorMismatch
from .matrix import Matrix
from .qmatrix import INT64_SAFE, QMatrix
from .report import Report
from .rings import QQ, Ring, RingElement, element_from_json, element_to_json
from .roots import Root, RootSystem, add, build_root_system, neg, parse_root, root_label, root_string

# E8 (dim 248) would need a 120 MB dense tensor; larger algebras use the sparse rows
DENSE_TENSOR_MAX_DIM = 140


# -- structure constants ----------------------------------------------------

def _positive_constants(rs: RootSystem) -> dict[tuple[Root, Root], int]:
    order = {r: k for k, r in enumerate(rs.positive)}
    pos: dict[tuple[Root, Root], int] = {}

    def norm(r):
        return rs.inner(r, r)

    def general(a: Root, b: Root) -> Fraction:
        s = add(a, b)
        if not rs.is_root(s):
            return Fraction(0)
        ap, bp = rs.is_positive(a), rs.is_positive(b)
        if ap and bp:
            return Fraction(pos[(a, b)])
        if not ap and not bp:
            return -Fraction(pos[(neg(a), neg(b))])
        if not ap:
            return -general(b, a)
        c = neg(s)
        if rs.is_positive(c):
            return Fraction(norm(c), norm(b)) * pos[(c, a)]
        return -Fraction(norm(c), norm(a)) * pos[(neg(b), neg(c))]

    for g in rs.positive:
        pairs = sorted(((a, add(g, neg(a))) for a in rs.positive
                        if rs.is_root(add(g, neg(a))) and rs.is_positive(add(g, neg(a)))),
                       key=lambda ab: order[ab[0]])
        pairs = [(a, b) for a, b in pairs if order[a] < order[b]]
        if not pairs:
            continue
        xi, zeta = pairs[0]
        p, _ = root_string(rs, xi, zeta)
        pos[(xi, zeta)] = p + 1
        pos[(zeta, xi)] = -(p + 1)
        for a, b in pairs[1:]:
            t = Fraction(0)
            d1 = add(b, neg(xi))
            if rs.is_root(d1):
                t += general(b, neg(xi)) * general(a, neg(zeta)) / norm(d1)
            d2 = add(a, neg(xi))
            if rs.is_root(d2):
                t += general(neg(xi), a) * general(b, neg(zeta)) / norm(d2)
            val = Fraction(norm(g), pos[(xi, zeta)]) * t
            if val.denominator != 1:
                raise ArithmeticError(f"non-integral constant for {a}, {b}")
            pos[(a, b)] = int(val)
            pos[(b, a)] = -int(val)

    full: dict[tuple[Root, Root], int] = {}
    for a in rs.roots:
        for b in rs.roots:
            if a != neg(b) and rs.is_root(add(a, b)):
                v = general(a, b)
                if v.denominator != 1:
                    raise ArithmeticError(f"non-integral constant for {a}, {b}")
                full[(a, b)] = int(v)
    return full


@dataclass
class StructureTable:
    """Integer data defining the bracket on the Chevalley basis.

    ``pairing[i][k]`` is ``<roots[k], a_i^vee>``; ``coroots[a]`` expresses
    ``h_a = [x_a, x_{-a}]`` over ``h_1..h_l``; ``N[(a, b)]`` is defined when
    ``a + b`` is a root.
    """

    rs: RootSystem
    pairing: list[list[int]]
    coroots: dict[Root, tuple[int, ...]]
    N: dict[tuple[Root, Root], int]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.rs.rank

    @property
    def dim(self) -> int:
        return self.rs.rank + len(self.rs.roots)

    def x_index(self, a: Root) -> int:
        return self.rank + self.rs.index[tuple(a)]

    def basis_labels(self) -> list[str]:
        return [f"h{i + 1}" for i in range(self.rank)] + [f"x[{root_label(r)}]" for r in self.rs.roots]

    def root_of(self, k: int) -> Root | None:
        return None if k < self.rank else self.rs.roots[k - self.rank]

    # -- sparse basis brackets ---------------------------------------------
    def basis_bracket(self, a: int, b: int) -> dict[int, int]:
        """``[e_a, e_b]`` as a sparse {basis index: integer} dictionary."""
        l = self.rank
        if a < l and b < l:
            return {}
        if a < l:
            return {b: self.pairing[a][b - l]} if self.pairing[a][b - l] else {}
        if b < l:
            v = self.pairing[b][a - l]
            return {a: -v} if v else {}
        ra, rb = self.rs.roots[a - l], self.rs.roots[b - l]
        if ra == neg(rb):
            return {i: c for i, c in enumerate(self.coroots[ra]) if c}
        n = self.N.get((ra, rb))
        if not n:
            return {}
        return {self.x_index(add(ra, rb)): n}

    @functools.cached_property
    def ad_rows(self) -> list[list[tuple[int, int, int]]]:
        """``ad_rows[a]`` lists ``(c, b, v)`` with ``[e_a, e_b] = ... + v e_c``."""
        d = self.dim
        return [[(c, b, v) for b in range(d) for c, v in self.basis_bracket(a, b).items()]
                for a in range(d)]

    @functools.cached_property
    def ad_tensor(self) -> np.ndarray | None:
        """``T[a, c, b]`` = coefficient of ``e_c`` in ``[e_a, e_b]`` (int64), or None when too large."""
        d = self.dim
        if d > DENSE_TENSOR_MAX_DIM:
            return None
        t = np.zeros((d, d, d), dtype=np.int64)
        for a, row in enumerate(self.ad_rows):
            for c, b, v in row:
                t[a, c, b] = v
        return t

    @functools.cached_property
    def max_constant(self) -> int:
        return max((abs(v) for row in self.ad_rows for _, _, v in row), default=1)

    def ad_basis(self, a: int) -> QMatrix:
        num = np.zeros((self.dim, self.dim), dtype=np.int64)
        for c, b, v in self.ad_rows[a]:
            num[c, b] = v
        return QMatrix(num, 1, normalized=True)

    def ad_x(self, a: Root) -> QMatrix:
        key = ("adx", tuple(a))
        if key not in self._cache:
            self._cache[key] = self.ad_basis(self.x_index(a))
        return self._cache[key]

    # -- elements ----------------------------------------------------------
    def element(self, ring: Ring, coeffs: Iterable) -> "LieElement":
        return LieElement(self, Matrix.column(ring, list(coeffs)))

    def zero(self, ring: Ring = QQ) -> "LieElement":
        return LieElement(self, Matrix.zeros(ring, self.dim, 1))

    def basis(self, k: int, ring: Ring = QQ, coeff=1) -> "LieElement":
        q = QMatrix.zeros(self.dim, 1)
        q.num[k, 0] = 1
        return LieElement(self, Matrix.from_qmatrix(ring, q).scale(coeff))

    def h(self, i: int, ring: Ring = QQ) -> "LieElement":
        return self.basis(i, ring)

    def x(self, a: Root, ring: Ring = QQ, coeff=1) -> "LieElement":
        return self.basis(self.x_index(a), ring, coeff)

    def ad(self, v: "LieElement") -> Matrix:
        return ad_matrix(v)

    # -- variants / serialization ------------------------------------------
    def with_flipped(self, a: Root, b: Root) -> "StructureTable":
        """A corrupted copy with the sign of ``N_{a,b}`` (and ``N_{b,a}``) flipped."""
        n = dict(self.N)
        n[(a, b)] = -n[(a, b)]
        n[(b, a)] = -n[(b, a)]
        return StructureTable(self.rs, [row[:] for row in self.pairing], dict(self.coroots), n)

    def to_json(self) -> dict:
        return {
            "type": self.rs.kind,
            "rank": self.rank,
            "dim": self.dim,
            "cartan": self.rs.cartan,
            "pairing": self.pairing,
            "coroots": {root_label(r): list(c) for r, c in self.coroots.items()},
            "N": [[root_label(a), root_label(b), n] for (a, b), n in sorted(
                self.N.items(), key=lambda kv: (self.rs.index[kv[0][0]], self.rs.index[kv[0][1]]))],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "StructureTable":
        rs = build_root_system(obj["type"], int(obj["rank"]))
        l = rs.rank
        coroots = {parse_root(k, l): tuple(int(c) for c in v) for k, v in obj["coroots"].items()}
        n = {(parse_root(a, l), parse_root(b, l)): int(v) for a, b, v in obj["N"]}
        return cls(rs, [list(map(int, row)) for row in obj["pairing"]], coroots, n)


@functools.lru_cache(maxsize=None)
def _cached_table(kind: str, rank: int) -> StructureTable:
    rs = build_root_system(kind, rank)
    pairing = [[rs.simple_pairing(r, i) for r in rs.roots] for i in range(rs.rank)]
    coroots = {}
    for r in rs.roots:
        c = rs.coroot_coefficients(r)
        assert all(v.denominator == 1 for v in c)
        coroots[r] = tuple(int(v) for v in c)
    return StructureTable(rs, pairing, coroots, _positive_constants(rs))


def build_structure_table(rs: RootSystem | str, rank: int | None = None) -> StructureTable:
    if isinstance(rs, str):
        return _cached_table(rs.upper(), rank)
    return _cached_table(rs.kind, rs.rank)


# -- Lie elements -----------------------------------------------------------

class LieElement:
    """A vector of ``L(Phi, R)`` in the Chevalley basis (a column matrix over R)."""

    __slots__ = ("table", "vec")

    def __init__(self, table: StructureTable, vec: Matrix):
        self.table = table
        self.vec = vec

    @property
    def ring(self) -> Ring:
        return self.vec.ring

    @property
    def coeffs(self) -> list[RingElement]:
        return [self.vec.entry(k, 0) for k in range(self.table.dim)]

    def __getitem__(self, k: int) -> RingElement:
        return self.vec.entry(k, 0)

    def _check(self, other: "LieElement") -> None:
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.table, self.vec + other.vec)

    def __sub__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        return LieElement(self.table, self.vec - other.vec)

    def __neg__(self) -> "LieElement":
        return LieElement(self.table, -self.vec)

    def scale(self, r) -> "LieElement":
        return LieElement(self.table, self.vec.scale(r))

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.vec == other.vec

    def __hash__(self):
        return hash(self.vec)

    def is_zero(self) -> bool:
        return self.vec.is_zero()

    def lift(self, ring: Ring) -> "LieElement":
        return LieElement(self.table, self.vec.lift(ring))

    def __repr__(self) -> str:
        labels = self.table.basis_labels()
        terms = [f"{c}*{labels[k]}" for k, c in enumerate(self.coeffs) if c]
        return "LieElement(" + (" + ".join(terms) or "0") + ")"

    def to_json(self) -> dict:
        l = self.table.rank
        cs = self.coeffs
        xs = {root_label(self.table.rs.roots[k - l]): element_to_json(c)
              for k, c in enumerate(cs) if k >= l and c}
        return {"h": [element_to_json(c) for c in cs[:l]], "x": xs}

    @classmethod
    def from_json(cls, table: StructureTable, obj: dict, ring: Ring = QQ) -> "LieElement":
        coeffs = [ring.zero()] * table.dim
        for i, v in enumerate(obj.get("h", [])):
            coeffs[i] = element_from_json(ring, v)
        for label, v in obj.get("x", {}).items():
            coeffs[table.x_index(table.rs.parse(label))] = element_from_json(ring, v)
        return table.element(ring, coeffs)


def ad_matrix(a: LieElement) -> Matrix:
    """Matrix of ``[a, .]`` in the Chevalley basis."""
    table = a.table
    d = table.dim
    t = table.ad_tensor
    comps = {}
    for key, q in a.vec.comps.items():
        vec = q.num[:, 0]
        bound = max(abs(int(v)) for v in vec.tolist()) * table.max_constant * d
        if t is not None and bound < INT64_SAFE:
            num = np.tensordot(vec.astype(np.int64), t, axes=1).astype(object)
        else:
            num = np.zeros((d, d), dtype=object)
            for k, ck in enumerate(vec.tolist()):
                if ck:
                    for c, b, v in table.ad_rows[k]:
                        num[c, b] += ck * v
        comps[key] = QMatrix(num, q.den)
    return Matrix(a.ring, (d, d), comps)


def bracket(a: LieElement, b: LieElement) -> LieElement:
    a._check(b)
    return LieElement(a.table, ad_matrix(a) @ b.vec)


def apply(m: Matrix, v: LieElement) -> LieElement:
    """The image of ``v`` under a matrix acting on L."""
    return LieElement(v.table, m @ v.vec)


# -- verification -----------------------------------------------------------

def _sparse_bracket(table: StructureTable, u: dict[int, int], v: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for a, ca in u.items():
        for b, cb in v.items():
            for c, n in table.basis_bracket(a, b).items():
                out[c] = out.get(c, 0) + ca * cb * n
    return {k: v for k, v in out.items() if v}


def verify_antisymmetry(table: StructureTable) -> Report:
    rep = Report("antisymmetry", meta={"system": table.rs.name})
    labels = table.basis_labels()
    for a in range(table.dim):
        for b in range(a, table.dim):
            ab = table.basis_bracket(a, b)
            ba = table.basis_bracket(b, a)
            ok = ab == {k: -v for k, v in ba.items()} and (a != b or not ab)
            rep.record(ok, "antisymmetry", {"pair": [labels[a], labels[b]]})
    return rep.finish()


def verify_jacobi(table: StructureTable) -> Report:
    """Exhaustive Jacobi check on all basis triples."""
    rep = Report("jacobi", meta={"system": table.rs.name, "dim": table.dim})
    labels = table.basis_labels()
    d = table.dim
    br = {(a, b): table.basis_bracket(a, b) for a in range(d) for b in range(d)}
    for a, b, c in itertools.product(range(d), repeat=3):
        total: dict[int, int] = {}
        for (u, v, w) in ((a, b, c), (b, c, a), (c, a, b)):
            for k, coeff in _sparse_bracket(table, br[(u, v)], {w: 1}).items():
                total[k] = total.get(k, 0) + coeff
        bad = {k: v for k, v in total.items() if v}
        rep.record(not bad, "jacobi", {"triple": [labels[a], labels[b], labels[c]]},
                   "" if not bad else f"residual {bad}")
    return rep.finish()


def structure_constant_magnitudes(table: StructureTable) -> dict[tuple[Root, Root], int]:
    return {k: abs(v) for k, v in table.N.items()}


def perfectness_rank(table: StructureTable) -> int:
    """Rank over Q of all brackets of basis pairs (equals dim when L = [L, L])."""
    d = table.dim
    rows = []
    for a in range(d):
        for b in range(a + 1, d):
            v = table.basis_bracket(a, b)
            if v:
                row = [0] * d
                for k, c in v.items():
                    row[k] = c
                rows.append(row)
    return QMatrix.from_ints(rows).rank()


def nilpotency_index(q: QMatrix, bound: int = 64) -> int | None:
    """Least ``k`` with ``q**k == 0`` (None if not reached within ``bound``)."""
    p = q
    for k in range(1, bound + 1):
        if p.is_zero():
            return k
        p = p @ q
    return None
