"""Automorphisms of L(Phi, R) for R = Q or Q^d.

A semilinear automorphism is stored as ``f = B(sigma) o L`` where ``L`` is an
R-linear matrix and ``B(sigma)`` moves the coordinate ``e_c L`` of
``R (x) L = L^d`` to ``e_{sigma(c)} L``.  Permutations are 0-based
internally and 1-based in JSON.

The constructive decomposition handles monomial automorphisms (those which
keep the Cartan span and permute root lines): ``f = diagram o torus o weyl``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import LieElement, StructureTable, bracket, build_structure_table
from .curves import basis_curves, lie_element_of, rep, truncate
from .errors import (BadIdempotents, DescriptorMismatch, ExtensionInconsistent, NotAnAutomorphism,
                     NotLinear, NotMonomial, NotSemilinear, ResidualNotTorus)
from .group import GroupElement, exp_generator, is_lie_automorphism, preserves_bracket, w_element
from .matrix import Matrix
from .qmatrix import QMatrix, block_diag, hstack
from .report import Report
from .rings import (QQ, Product, Rationals, Ring, RingElement, Truncated, invert, is_unit, ring_from_json,
                    ring_to_json)
from .roots import (Perm, compose, dynkin_symmetries, inverse_perm, neg, reduce_to_diagram_symmetry,
                    root_label, word_to_json)


def _coords(ring: Ring) -> int:
    if isinstance(ring, Rationals):
        return 1
    if isinstance(ring, Product) and isinstance(ring.factor, Rationals):
        return ring.d
    raise DescriptorMismatch(f"automorphisms are supported over Q and Q^d, not {ring}")


def _check_perm(sigma: Sequence[int], d: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(d)):
        raise ValueError(f"{sigma} is not a permutation of {d} coordinates")
    return sigma


class SemilinearAut:
    """``f = B(sigma) o linear`` on ``L(Phi, R)``."""

    __slots__ = ("table", "ring", "sigma", "linear")

    def __init__(self, table: StructureTable, linear: Matrix, sigma: Sequence[int] | None = None):
        d = _coords(linear.ring)
        self.table = table
        self.ring = linear.ring
        self.linear = linear
        self.sigma = tuple(range(d)) if sigma is None else _check_perm(sigma, d)

    @property
    def d(self) -> int:
        return len(self.sigma)

    @property
    def is_linear(self) -> bool:
        return self.sigma == tuple(range(self.d))

    @classmethod
    def identity(cls, table: StructureTable, ring: Ring = QQ) -> "SemilinearAut":
        return cls(table, Matrix.identity(ring, table.dim))

    @classmethod
    def coordinate_permutation(cls, table: StructureTable, ring: Product, sigma: Sequence[int]
                               ) -> "SemilinearAut":
        return cls(table, Matrix.identity(ring, table.dim), sigma)

    def _twist(self, m: Matrix, sigma: Sequence[int]) -> Matrix:
        """``B(sigma)^{-1} m B(sigma)``: coordinate ``c`` becomes coordinate ``sigma(c)`` of m."""
        if isinstance(self.ring, Rationals):
            return m
        return m.permute_coordinates(sigma)

    def __matmul__(self, other: "SemilinearAut") -> "SemilinearAut":
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
        lin = self._twist(self.linear, other.sigma) @ other.linear
        return SemilinearAut(self.table, lin, compose(self.sigma, other.sigma))

    def inverse(self) -> "SemilinearAut":
        inv_sigma = inverse_perm(self.sigma)
        return SemilinearAut(self.table, self._twist(self.linear.inverse(), inv_sigma), inv_sigma)

    def apply(self, v: LieElement) -> LieElement:
        out = self.linear @ v.vec
        if not self.is_linear:
            out = out.permute_coordinates(inverse_perm(self.sigma))
        return LieElement(self.table, out)

    __call__ = apply

    def conjugate_matrix(self, m: Matrix) -> Matrix:
        """``f m f^{-1}`` for an R-linear matrix ``m``."""
        inner = self.linear @ m @ self.linear.inverse()
        return self._twist(inner, inverse_perm(self.sigma))

    def full_qmatrix(self) -> QMatrix:
        """The Q-matrix on ``Q^(d * dim)`` (coordinate-major blocks)."""
        if isinstance(self.ring, Rationals):
            return self.linear.as_qmatrix()
        n = self.table.dim
        diag = block_diag([self.linear.coordinate(c).as_qmatrix() for c in range(self.d)])
        perm = QMatrix.zeros(self.d * n)
        for c, s in enumerate(self.sigma):
            for k in range(n):
                perm.num[s * n + k, c * n + k] = 1
        return perm @ diag

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemilinearAut):
            return NotImplemented
        return self.sigma == other.sigma and self.linear == other.linear

    def __hash__(self):
        return hash((self.sigma, self.linear))

    def is_identity(self) -> bool:
        return self.is_linear and self.linear.is_identity()

    def is_automorphism(self) -> bool:
        # B(sigma) preserves brackets (integral structure constants), so only L matters
        return is_lie_automorphism(self.table, self.linear)

    def check_semilinear(self) -> bool:
        """``f(r x) = sigma(r) f(x)`` for the idempotent generators and every basis vector."""
        ring = self.ring
        d = self.d
        gens = [ring.one()] if d == 1 else [ring.element(tuple(Fraction(int(i == c)) for i in range(d)))
                                            for c in range(d)]
        for c, r in enumerate(gens):
            sr = gens[self.sigma[c]] if d > 1 else r
            for k in range(self.table.dim):
                x = self.table.basis(k, ring)
                if self.apply(x.scale(r)) != self.apply(x).scale(sr):
                    return False
        return True

    def __repr__(self) -> str:
        return f"SemilinearAut({self.table.rs.name}, {self.ring}, sigma={self.sigma})"

    def to_json(self) -> dict:
        return {"type": self.table.rs.kind, "rank": self.table.rank, "ring": ring_to_json(self.ring),
                "sigma": [s + 1 for s in self.sigma], "matrix": self.full_qmatrix().to_json()}

    @classmethod
    def from_json(cls, obj: dict, table: StructureTable | None = None, ring: Ring | None = None
                  ) -> "SemilinearAut":
        if table is None:
            table = build_structure_table(obj["type"], int(obj["rank"]))
        if ring is None:
            ring = ring_from_json(obj["ring"]) if "ring" in obj else None
        q = QMatrix.from_json(obj["matrix"])
        n = table.dim
        if q.shape[0] != q.shape[1] or q.shape[0] % n:
            raise ValueError(f"matrix of shape {q.shape} does not act on L of dimension {n}")
        d = q.shape[0] // n
        if ring is None:
            ring = QQ if d == 1 else Product(d)
        if _coords(ring) != d:
            raise DescriptorMismatch(f"matrix has {d} blocks but the ring is {ring}")
        f = extract_ring_automorphism(table, q, ring)
        if "sigma" in obj and tuple(s - 1 for s in obj["sigma"]) != f.sigma:
            raise NotSemilinear(f"declared sigma {obj['sigma']} does not match the matrix")
        return f


# -- constructors -----------------------------------------------------------

def inner(g: GroupElement) -> SemilinearAut:
    if not is_lie_automorphism(g.table, g.matrix):
        raise NotAnAutomorphism("conjugating matrix is not an automorphism of L")
    return SemilinearAut(g.table, g.matrix)


def _unit(ring: Ring, c) -> RingElement:
    c = c if isinstance(c, RingElement) else ring(c)
    if not is_unit(c):
        invert(c)  # raises NotAUnit
    return c


def torus(table: StructureTable, c: Sequence, ring: Ring = QQ) -> SemilinearAut:
    """``h_j -> h_j``, ``x_a -> prod c_i^{n_i} x_a``."""
    if len(c) != table.rank:
        raise ValueError(f"need {table.rank} torus coordinates, got {len(c)}")
    c = [_unit(ring, v) for v in c]
    cinv = [invert(v) for v in c]
    diag = [ring.one()] * table.rank
    for a in table.rs.roots:
        v = ring.one()
        for i, n in enumerate(a):
            for _ in range(abs(n)):
                v = v * (c[i] if n > 0 else cinv[i])
        diag.append(v)
    n = table.dim
    rows = [[diag[i] if i == j else ring.zero() for j in range(n)] for i in range(n)]
    return SemilinearAut(table, Matrix.from_entries(ring, rows))


def weyl_element(table: StructureTable, word: Sequence[int], ring: Ring = QQ) -> GroupElement:
    g = GroupElement.identity(table, ring)
    for i in word:
        g = g @ w_element(table, table.rs.simple[i], ring.one())
    return g


def weyl(table: StructureTable, word: Sequence[int], ring: Ring = QQ) -> SemilinearAut:
    return SemilinearAut(table, weyl_element(table, word, ring).matrix)


def _pinned_images(table: StructureTable, delta: Sequence[int]) -> QMatrix:
    """Columns: images of the basis under the automorphism pinned by ``delta``."""
    rs = table.rs
    img: dict[int, LieElement] = {}
    for i in range(rs.rank):
        img[table.x_index(rs.simple[i])] = table.x(rs.simple[delta[i]])
        img[table.x_index(neg(rs.simple[i]))] = table.x(neg(rs.simple[delta[i]]))
    for i in range(rs.rank):
        img[i] = bracket(img[table.x_index(rs.simple[i])], img[table.x_index(neg(rs.simple[i]))])
    for sign in (1, -1):
        for g in rs.positive:
            if sum(g) == 1:
                continue
            j = next(j for j in range(rs.rank) if rs.is_root(tuple(c - int(k == j) for k, c in enumerate(g))))
            a = rs.simple[j]
            b = tuple(c - int(k == j) for k, c in enumerate(g))
            if sign < 0:
                a, b, g = neg(a), neg(b), neg(g)
            n = table.N[(a, b)]
            v = bracket(img[table.x_index(a)], img[table.x_index(b)])
            img[table.x_index(g)] = v.scale(Fraction(1, n))
    return hstack([img[k].vec.as_qmatrix() for k in range(table.dim)])


def diagram_matrix(table: StructureTable, delta: Sequence[int]) -> QMatrix:
    delta = tuple(delta)
    key = ("diagram", delta)
    if key not in table._cache:
        a = table.rs.cartan
        l = table.rank
        if sorted(delta) != list(range(l)) or any(a[delta[i]][delta[j]] != a[i][j]
                                                  for i in range(l) for j in range(l)):
            raise ValueError(f"{delta} is not a Dynkin diagram symmetry")
        q = _pinned_images(table, delta)
        m = Matrix(QQ, q.shape, {(): q})
        if q.det() == 0 or preserves_bracket(table, m, full=True) is not None:
            raise ExtensionInconsistent(f"extension of {delta} is not an automorphism")
        table._cache[key] = q
    return table._cache[key]


def _check_idempotents(ring: Ring, es: Sequence[RingElement]) -> None:
    total = ring.zero()
    for i, e in enumerate(es):
        if e * e != e:
            raise BadIdempotents(f"{e} is not idempotent")
        for f in es[i + 1:]:
            if e * f != ring.zero():
                raise BadIdempotents(f"{e} and {f} are not orthogonal")
        total = total + e
    if total != ring.one():
        raise BadIdempotents("idempotents do not sum to 1")


def diagram(table: StructureTable, assignment, ring: Ring = QQ) -> SemilinearAut:
    """``sum e_i D(delta_i)`` for orthogonal idempotents summing to 1.

    ``assignment`` is a list of ``(e_i, delta_i)`` pairs, or a single
    symmetry meaning ``[(1, delta)]``.
    """
    if assignment and isinstance(assignment[0], int):
        assignment = [(ring.one(), tuple(assignment))]
    es = [e if isinstance(e, RingElement) else ring(e) for e, _ in assignment]
    _check_idempotents(ring, es)
    total = Matrix.zeros(ring, table.dim)
    for e, (_, delta) in zip(es, assignment):
        total = total + Matrix.from_qmatrix(ring, diagram_matrix(table, delta)).scale(e)
    return SemilinearAut(table, total)


def blockwise(table: StructureTable, parts: Sequence[SemilinearAut]) -> SemilinearAut:
    """The R-linear automorphism of ``L(Phi, Q^d)`` acting as ``parts[c]`` on coordinate c."""
    ring = Product(len(parts))
    for p in parts:
        if not isinstance(p.ring, Rationals):
            raise DescriptorMismatch("blocks must be automorphisms over Q")
    return SemilinearAut(table, Matrix.from_coordinates(ring, [p.linear for p in parts]))


# -- decomposition ----------------------------------------------------------

@dataclass
class MonomialDecomposition:
    delta: tuple[int, ...]
    torus: tuple[Fraction, ...]
    weyl: tuple[int, ...]

    def recompose(self, table: StructureTable) -> SemilinearAut:
        return diagram(table, self.delta) @ torus(table, self.torus) @ weyl(table, self.weyl)

    def to_json(self) -> dict:
        return {"delta": [i + 1 for i in self.delta],
                "torus": {str(i + 1): str(c) for i, c in enumerate(self.torus)},
                "weyl": word_to_json(self.weyl)}


def root_permutation(f: SemilinearAut) -> Perm:
    """The permutation of root lines of a monomial automorphism over Q."""
    if not isinstance(f.ring, Rationals):
        raise DescriptorMismatch("monomial decomposition works over Q; split Q^d first")
    q = f.linear.as_qmatrix()
    table = f.table
    l = table.rank
    rows = q.num.tolist()
    n = table.dim
    for j in range(l):
        if any(rows[i][j] for i in range(l, n)):
            raise NotMonomial(f"h{j + 1} is moved off the Cartan span")
    perm = []
    for k in range(l, n):
        nz = [i for i in range(n) if rows[i][k]]
        if len(nz) != 1 or nz[0] < l:
            raise NotMonomial(f"x[{root_label(table.rs.roots[k - l])}] is not sent to a root line")
        perm.append(nz[0] - l)
    if sorted(perm) != list(range(n - l)):
        raise NotMonomial("root lines are not permuted")
    return tuple(perm)


def decompose_monomial(f: SemilinearAut) -> MonomialDecomposition:
    table = f.table
    if not f.is_linear:
        raise NotLinear("decompose the R-linear part; extract the ring automorphism first")
    pi = root_permutation(f)
    word, delta = reduce_to_diagram_symmetry(table.rs, pi)
    # pi = w o delta = delta o w' with w' = delta^{-1} w delta
    dinv = inverse_perm(delta)
    wprime = tuple(dinv[i] for i in word)
    dq = Matrix(QQ, (table.dim, table.dim), {(): diagram_matrix(table, delta)})
    g = weyl_element(table, wprime)
    residual = dq.inverse() @ f.linear @ g.inverse().matrix
    q = residual.as_qmatrix()
    l = table.rank
    c = tuple(q[l + table.rs.index[s], l + table.rs.index[s]] for s in table.rs.simple)
    if any(v == 0 for v in c):
        raise ResidualNotTorus("residual has a zero on a simple root line")
    if torus(table, c).linear != residual:
        raise ResidualNotTorus("residual is not a torus element")
    return MonomialDecomposition(tuple(delta), c, wprime)


def split_by_idempotents(f: SemilinearAut | QMatrix, table: StructureTable | None = None,
                         d: int | None = None) -> list[SemilinearAut]:
    """Restrictions of an R-linear automorphism of ``L(Phi, Q^d)`` to each ``e_c L``."""
    if isinstance(f, SemilinearAut):
        table, q, d = f.table, f.full_qmatrix(), f.d
    else:
        q = f
    n = table.dim
    parts = []
    for c in range(d):
        for c2 in range(d):
            if c2 != c and not q.block(c2 * n, (c2 + 1) * n, c * n, (c + 1) * n).is_zero():
                raise NotLinear(f"coordinate {c + 1} is moved into coordinate {c2 + 1}")
        blk = q.block(c * n, (c + 1) * n, c * n, (c + 1) * n)
        parts.append(SemilinearAut(table, Matrix(QQ, blk.shape, {(): blk})))
    return parts


def decompose_blockwise(f: SemilinearAut) -> list[MonomialDecomposition]:
    if isinstance(f.ring, Rationals):
        return [decompose_monomial(f)]
    if not f.is_linear:
        raise NotLinear("f is not R-linear")
    return [decompose_monomial(p) for p in split_by_idempotents(f)]


def recompose_blockwise(table: StructureTable, decs: Sequence[MonomialDecomposition]) -> SemilinearAut:
    parts = [dec.recompose(table) for dec in decs]
    return parts[0] if len(parts) == 1 else blockwise(table, parts)


def extract_ring_automorphism(table: StructureTable, q: QMatrix, ring: Ring | None = None
                              ) -> SemilinearAut:
    """Split a Q-matrix on ``L(Phi, Q^d)`` into ``B(sigma) o L``; raises NotSemilinear."""
    n = table.dim
    if q.shape[0] != q.shape[1] or q.shape[0] % n:
        raise ValueError(f"matrix of shape {q.shape} does not act on L of dimension {n}")
    d = q.shape[0] // n
    if ring is None:
        ring = QQ if d == 1 else Product(d)
    if d == 1:
        return SemilinearAut(table, Matrix(QQ, q.shape, {(): q}))
    sigma = []
    blocks = []
    for c in range(d):
        targets = [c2 for c2 in range(d)
                   if not q.block(c2 * n, (c2 + 1) * n, c * n, (c + 1) * n).is_zero()]
        if len(targets) != 1:
            raise NotSemilinear(f"coordinate {c + 1} is not sent to a single coordinate")
        sigma.append(targets[0])
        blocks.append(q.block(targets[0] * n, (targets[0] + 1) * n, c * n, (c + 1) * n))
    if sorted(sigma) != list(range(d)):
        raise NotSemilinear("coordinates are not permuted")
    lin = Matrix.from_coordinates(ring, [Matrix(QQ, (n, n), {(): b}) for b in blocks])
    return SemilinearAut(table, lin, sigma)


# -- standardness map and its differential ----------------------------------

def standardness_map(f: SemilinearAut, g: GroupElement) -> GroupElement:
    """``f' : g -> f g f^{-1}``."""
    if g.ring != f.ring:
        raise DescriptorMismatch(f"{g.ring} vs {f.ring}")
    return GroupElement(f.table, f.conjugate_matrix(g.matrix))


JET_ORDER = 2


def _jet_ring(ring: Ring) -> Truncated:
    return Truncated(ring, "t", JET_ORDER)


def jet_for(table: StructureTable, x: LieElement) -> Matrix:
    """``c(t) mod t^2`` for the curve ``prod_k REP_{x_k t}(B_k)`` with tangent ``x``.

    ``B_k`` are the explicit basis curves (``x_a(t)`` and the Prop-6 curves for
    ``h_i``), so the jet comes from a genuine element of the curve group.
    """
    ring = x.ring
    key = ("basis-curves", ring)
    if key not in table._cache:
        table._cache[key] = basis_curves(table, ring)
    curves = table._cache[key]
    jr = _jet_ring(ring)
    acc = Matrix.identity(jr, table.dim)
    for k, c in enumerate(curves):
        coeff = x[k]
        if not coeff:
            continue
        scaled = rep(c.ring.gen() * c.ring.lift(coeff), c)
        acc = acc @ truncate(scaled.matrix, JET_ORDER)
    return acc


def phi_tilde(f: SemilinearAut, jet: Matrix) -> Matrix:
    """The induced automorphism applied entrywise to a matrix over ``R[t]/(t^2)``."""
    if not f.is_linear:
        raise NotLinear("the differential is defined for R-linear automorphisms")
    lin = f.linear.lift(jet.ring)
    return lin @ jet @ f.linear.inverse().lift(jet.ring)


def d_phi(f: SemilinearAut, x: LieElement) -> LieElement:
    """``d phi(X)``: the tangent of ``phi(1 + tX + o(t))``."""
    jet = phi_tilde(f, jet_for(f.table, x))
    if not jet.coefficient(0).is_identity():
        raise ArithmeticError("induced curve is not based at the identity")
    return lie_element_of(f.table, jet.coefficient(1))


def differential_of_standard(f: SemilinearAut) -> Matrix:
    """Matrix of ``d phi`` read off generator and Prop-6 curves."""
    table = f.table
    cols = [d_phi(f, table.basis(k, f.ring)) for k in range(table.dim)]
    n = table.dim
    comps: dict = {}
    for k, v in enumerate(cols):
        for key, q in v.vec.comps.items():
            comps.setdefault(key, [[0] * n for _ in range(n)])
            for i in range(n):
                comps[key][i][k] = q[i, 0]
    return Matrix(f.ring, (n, n), {key: QMatrix.from_rows(rows) for key, rows in comps.items()})


# -- centralizer probe ------------------------------------------------------

def probe_generators(table: StructureTable, ring: Ring = QQ) -> list[GroupElement]:
    rs = table.rs
    return [exp_generator(table, a, ring.one()) for a in rs.simple + [neg(s) for s in rs.simple]]


def centralizer_probe(f: SemilinearAut) -> Report:
    """Does ``f g f^{-1} = g`` hold for every generator ``x_{+-a_i}(1)``?"""
    rep_ = Report("centralizer", meta={"system": f.table.rs.name})
    witness = None
    for g in probe_generators(f.table, f.ring):
        a = g.word[0][0]
        ok = standardness_map(f, g) == g
        rep_.record(ok, "commutes", {"generator": f"x[{root_label(a)}](1)"})
        if not ok and witness is None:
            witness = f"x[{root_label(a)}](1)"
    rep_.meta["witness"] = witness if witness is not None else "commutes with all"
    return rep_.finish()


# -- samplers ---------------------------------------------------------------

TORUS_VALUES = (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 3)


def random_monomial(rng: random.Random, table: StructureTable, max_word: int = 4
                    ) -> tuple[tuple[int, ...], tuple, tuple[int, ...], SemilinearAut]:
    delta = rng.choice(dynkin_symmetries(table.rs))
    c = tuple(Fraction(rng.choice(TORUS_VALUES)) for _ in range(table.rank))
    w = tuple(rng.randrange(table.rank) for _ in range(rng.randint(0, max_word)))
    f = diagram(table, delta) @ torus(table, c) @ weyl(table, w)
    return delta, c, w, f


def random_semilinear(rng: random.Random, table: StructureTable, d: int
                      ) -> tuple[tuple[int, ...], SemilinearAut]:
    """``B(sigma) o blockwise(random monomials)`` over ``Q^d``."""
    sigma = list(range(d))
    rng.shuffle(sigma)
    parts = [random_monomial(rng, table, 2)[3] for _ in range(d)]
    f = SemilinearAut.coordinate_permutation(table, Product(d), sigma) @ blockwise(table, parts)
    return tuple(sigma), f


def random_group_word(rng: random.Random, table: StructureTable, length: int = 3,
                      values: Sequence = (1, -1, 2, Fraction(1, 2), -3)) -> GroupElement:
    word = [(rng.choice(table.rs.roots), Fraction(rng.choice(values))) for _ in range(length)]
    return GroupElement.from_word(table, word)


__all__ = [
    "SemilinearAut", "inner", "torus", "weyl", "weyl_element", "diagram", "diagram_matrix", "blockwise",
    "MonomialDecomposition", "root_permutation", "decompose_monomial", "split_by_idempotents",
    "decompose_blockwise", "recompose_blockwise", "extract_ring_automorphism", "standardness_map",
    "differential_of_standard", "d_phi", "jet_for", "phi_tilde", "centralizer_probe", "probe_generators",
    "random_monomial", "random_semilinear", "random_group_word",
]
