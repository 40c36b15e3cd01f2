"""Curves on E(Phi, R): group elements over R[t] built from generator words.

A curve is stored as its matrix over ``R[t]`` together with the word of
``(root, polynomial)`` factors it was built from.  Words are what make a
matrix a member of the curve group here; raw matrices are never tested
for membership.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

from .algebra import LieElement, StructureTable, ad_matrix, apply, bracket
from .errors import DescriptorMismatch, NotBasedAtIdentity, NotInLieAlgebra
from .group import GroupElement, exp_generator
from .matrix import Matrix
from .qmatrix import QMatrix
from .report import Report
from .rings import QQ, Poly, Ring, RingElement, Truncated, _Graded, element_to_json, substitute
from .roots import neg

LEVEL_INFINITE = math.inf


def _poly(ring: Poly, f) -> RingElement:
    if isinstance(f, RingElement):
        if f.ring == ring:
            return f
        return ring.lift(f)
    if isinstance(f, (list, tuple)):
        return ring.from_coeffs(f)
    return ring(f)


class Curve:
    """A curve ``t -> g(t)`` in the elementary group over ``R[t]``."""

    __slots__ = ("element", "_level")

    def __init__(self, element: GroupElement):
        if not isinstance(element.ring, Poly):
            raise DescriptorMismatch(f"curves live over a polynomial ring, not {element.ring}")
        self.element = element
        self._level = None

    @property
    def table(self) -> StructureTable:
        return self.element.table

    @property
    def matrix(self) -> Matrix:
        return self.element.matrix

    @property
    def word(self):
        return self.element.word

    @property
    def ring(self) -> Poly:
        return self.element.ring

    @property
    def base(self) -> Ring:
        return self.ring.base

    @property
    def level(self) -> float:
        if self._level is None:
            self._level = filtration_level(self)
        return self._level

    def __matmul__(self, other: "Curve") -> "Curve":
        return Curve(self.element @ other.element)

    __mul__ = __matmul__

    def inverse(self) -> "Curve":
        return Curve(self.element.inverse())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Curve):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"Curve({self.element!r})"

    def evaluate(self, r) -> GroupElement:
        """The group element ``g(r)`` over the base ring."""
        r = self.base(r) if not isinstance(r, RingElement) else r
        word = None
        if self.word is not None:
            word = tuple((a, substitute(f, r)) for a, f in self.word)
        return GroupElement(self.table, self.matrix.substitute(r), word)

    def to_json(self) -> list | None:
        return self.element.word_to_json()


def curve_from_word(table: StructureTable, word: Sequence, base: Ring = QQ, var: str = "t") -> Curve:
    """Product of ``x_a(f(t))`` over ``word = [(a, f), ...]``."""
    ring = Poly(base, var)
    g = None
    for a, f in word:
        x = exp_generator(table, a, _poly(ring, f))
        g = x if g is None else g @ x
    return Curve(g if g is not None else GroupElement.identity(table, ring))


def constant_curve(g: GroupElement, var: str = "t") -> Curve:
    return Curve(g.lift(Poly(g.ring, var)))


def identity_curve(table: StructureTable, base: Ring = QQ, var: str = "t") -> Curve:
    return Curve(GroupElement.identity(table, Poly(base, var)))


def commutator(c1: Curve, c2: Curve) -> Curve:
    return c1 @ c2 @ c1.inverse() @ c2.inverse()


def conjugate_curve(g: GroupElement, c: Curve) -> Curve:
    gc = constant_curve(g, c.ring.var) if g.ring != c.ring else Curve(g)
    return gc @ c @ gc.inverse()


def rep(f, c: Curve) -> Curve:
    """Reparametrisation ``REP_f(c)(t) = c(f(t))``."""
    f = _poly(c.ring, f)
    word = None
    if c.word is not None:
        word = tuple((a, substitute(p, f)) for a, p in c.word)
    return Curve(GroupElement(c.table, c.matrix.substitute(f), word))


def filtration_level(c: Curve | Matrix) -> float:
    """Largest ``k`` with ``c = 1 mod t^k``; ``inf`` for the identity."""
    m = c.matrix if isinstance(c, Curve) else c
    if not isinstance(m.ring, _Graded):
        raise DescriptorMismatch(f"{m.ring} has no variable")
    low = (m - Matrix.identity(m.ring, m.shape[0])).low_degree()
    return LEVEL_INFINITE if low is None else low


# -- tangent vectors --------------------------------------------------------

def _ad_readoff(table: StructureTable) -> tuple[list[int], QMatrix]:
    """For each root, a simple index ``i`` with ``<a, a_i^vee> != 0``, and the inverse Cartan matrix."""
    key = ("readoff",)
    if key not in table._cache:
        l = table.rank
        pick = [next(i for i in range(l) if table.pairing[i][k]) for k in range(len(table.rs.roots))]
        table._cache[key] = (pick, QMatrix.from_ints(table.rs.cartan).inverse())
    return table._cache[key]


def lie_element_of(table: StructureTable, m: Matrix) -> LieElement:
    """The ``X`` with ``ad X = m``; raises NotInLieAlgebra when there is none.

    ``[X, h_i]`` exposes the root coefficients of X and the diagonal of ``ad X``
    on the simple root vectors gives ``C c`` for the Cartan part ``c``; the
    candidate is then checked against ``m`` exactly.
    """
    l, d = table.rank, table.dim
    pick, cinv = _ad_readoff(table)
    comps = {}
    for key, q in m.comps.items():
        num = q.num
        col = [Fraction(0)] * d
        for k, i in enumerate(pick):
            col[l + k] = Fraction(-num[l + k, i], q.den * table.pairing[i][k])
        diag = QMatrix.column(Fraction(num[table.x_index(s), table.x_index(s)], q.den) for s in table.rs.simple)
        h = cinv @ diag
        for i in range(l):
            col[i] = h[i, 0]
        comps[key] = QMatrix.column(col)
    x = LieElement(table, Matrix(m.ring, (d, 1), comps))
    if ad_matrix(x) != m:
        raise NotInLieAlgebra("matrix is not ad of any element of L")
    return x


def tangent_vector(c: Curve) -> LieElement:
    """The ``t``-coefficient of a curve based at the identity, as an element of L."""
    if c.level < 1:
        raise NotBasedAtIdentity("curve does not pass through the identity at t = 0")
    return lie_element_of(c.table, c.matrix.coefficient(1))


# -- commutator of level-1 curves ---------------------------------------------

def truncate(m: Matrix, order: int = 3) -> Matrix:
    """Reduce a matrix over ``R[t]`` modulo ``t^order``."""
    ring = m.ring
    if not isinstance(ring, Poly):
        raise DescriptorMismatch(f"{ring} is not a polynomial ring")
    target = Truncated(ring.base, ring.var, order)
    return Matrix(target, m.shape, {k: q for k, q in m.comps.items() if k[0] < order}, pruned=True)


def formula1_holds(c1: Curve, c2: Curve) -> tuple[bool, str]:
    """``[c1, c2] = 1 + t^2 ad[X1, X2] mod t^3`` for level-1 curves."""
    x1, x2 = tangent_vector(c1), tangent_vector(c2)
    m1, m2 = truncate(c1.matrix), truncate(c2.matrix)
    comm = m1 @ m2 @ m1.inverse() @ m2.inverse()
    ring = comm.ring
    expected = Matrix.identity(ring, c1.table.dim)
    br = bracket(x1, x2)
    ad2 = ad_matrix(br).lift(ring).scale(ring.gen() ** 2)
    expected = expected + ad2
    if comm == expected:
        return True, ""
    diff = comm - expected
    return False, f"residual in degrees {sorted({k[0] for k in diff.comps})}"


def verify_formula1(pairs: Sequence[tuple[Curve, Curve]], name: str = "formula1") -> Report:
    rep = Report(name)
    for k, (c1, c2) in enumerate(pairs):
        ok, detail = formula1_holds(c1, c2)
        rep.record(ok, "formula1", {"pair": k, "c1": c1.to_json(), "c2": c2.to_json()}, detail)
    return rep.finish()


def simple_generator_curves(table: StructureTable, base: Ring = QQ) -> list[Curve]:
    rs = table.rs
    return [curve_from_word(table, [(a, [0, 1])], base) for a in rs.simple + [neg(s) for s in rs.simple]]


# -- h_i from generators, tangent realisation --------------------------------

def prop6_lhs_rhs(table: StructureTable, i: int, g: GroupElement | None = None,
                  base: Ring = QQ) -> tuple[LieElement, LieElement]:
    """``h_i`` and ``g(x_{-i}) + x_i - x_{-i}`` with ``g = x_i(1)`` by default."""
    a = table.rs.simple[i]
    if g is None:
        g = exp_generator(table, a, base.one())
    lhs = table.h(i, base)
    rhs = apply(g.matrix, table.x(neg(a), base)) + table.x(a, base) - table.x(neg(a), base)
    return lhs, rhs


def h_curve(table: StructureTable, i: int, base: Ring = QQ) -> Curve:
    """A curve with tangent ``h_i``: ``g x_{-i}(t) g^{-1} x_i(t) x_{-i}(-t)``, ``g = x_i(1)``."""
    a = table.rs.simple[i]
    g = exp_generator(table, a, base.one())
    c = conjugate_curve(g, curve_from_word(table, [(neg(a), [0, 1])], base))
    return c @ curve_from_word(table, [(a, [0, 1]), (neg(a), [0, -1])], base)


def basis_curves(table: StructureTable, base: Ring = QQ) -> list[Curve]:
    """One curve per Chevalley basis vector, in basis order."""
    out = [h_curve(table, i, base) for i in range(table.rank)]
    out.extend(curve_from_word(table, [(a, [0, 1])], base) for a in table.rs.roots)
    return out


def prop6_identities(table: StructureTable, base: Ring = QQ) -> Report:
    rep = Report("prop6", meta={"system": table.rs.name})
    for i in range(table.rank):
        lhs, rhs = prop6_lhs_rhs(table, i, base=base)
        rep.record(lhs == rhs, "identity", {"i": i + 1}, "" if lhs == rhs else repr(rhs))
        ident = GroupElement.identity(table, base)
        lhs0, rhs0 = prop6_lhs_rhs(table, i, ident, base)
        rep.record(lhs0 != rhs0, "control", {"i": i + 1}, "identity in place of x_i(1) did not break it")
    labels = table.basis_labels()
    for k, c in enumerate(basis_curves(table, base)):
        ok = c.level >= 1 and tangent_vector(c) == table.basis(k, base)
        rep.record(ok, "tangent", {"basis": labels[k], "curve": c.to_json()})
    return rep.finish()


# -- retractions ------------------------------------------------------------

def two_variable_ring(base: Ring = QQ, var: str = "t", var2: str = "t'") -> Poly:
    return Poly(Poly(base, var), var2)


def _evaluate_two(m: Matrix, r, r2) -> Matrix:
    """Evaluate a matrix over ``(R[t])[t']`` at ``t' = r2`` and then ``t = r``."""
    inner = m.ring.base
    base = inner.base
    return m.substitute(inner(base(r2))).substitute(base(r))


def retraction_checks(c: Curve, r, r2) -> dict[str, bool]:
    base = c.base
    ring2 = two_variable_ring(base, c.ring.var)
    t = ring2.lift(c.ring.gen())
    t2 = ring2.gen()
    r, r2 = base(r), base(r2)
    lifted = c.matrix
    add_sub = _evaluate_two(lifted.substitute(t + t2), r, r2)
    mul_sub = _evaluate_two(lifted.substitute(t * t2), r, r2)
    out = {
        "additive": add_sub == c.evaluate(r + r2).matrix,
        "multiplicative": mul_sub == c.evaluate(r * r2).matrix,
    }
    pi = rep(r, c)
    out["idempotent"] = rep(r, pi) == pi
    out["evaluation"] = rep(r, c).matrix.substitute(base.zero()) == c.evaluate(r).matrix
    return out


def retraction_laws(samples: Sequence[tuple[Curve, object, object]]) -> Report:
    rep_ = Report("retraction-laws")
    for k, (c, r, r2) in enumerate(samples):
        for name, ok in retraction_checks(c, r, r2).items():
            rep_.record(ok, name, {"sample": k, "curve": c.to_json(), "r": element_to_json(c.base(r)),
                                   "r2": element_to_json(c.base(r2))})
    return rep_.finish()


# -- random curves ----------------------------------------------------------

def random_polynomial(rng: random.Random, ring: Poly, max_degree: int = 2, constant: bool = False,
                      values: Sequence = (-2, -1, 1, 2, 3)) -> RingElement:
    deg = rng.randint(1, max_degree)
    coeffs = [rng.choice(values) if constant else 0] + [rng.choice((0,) + tuple(values)) for _ in range(deg - 1)]
    coeffs.append(rng.choice(values))
    return ring.from_coeffs(coeffs)


def random_curve(rng: random.Random, table: StructureTable, length: int = 2, based: bool = True,
                 base: Ring = QQ, max_degree: int = 2) -> Curve:
    ring = Poly(base, "t")
    word = [(rng.choice(table.rs.roots), random_polynomial(rng, ring, max_degree, constant=not based))
            for _ in range(length)]
    return curve_from_word(table, word, base)


__all__ = [
    "Curve", "curve_from_word", "constant_curve", "identity_curve", "commutator", "conjugate_curve",
    "rep", "filtration_level", "tangent_vector", "lie_element_of", "truncate", "formula1_holds",
    "verify_formula1", "simple_generator_curves", "prop6_lhs_rhs", "h_curve", "basis_curves",
    "prop6_identities", "retraction_checks", "retraction_laws", "random_curve", "random_polynomial",
    "two_variable_ring", "LEVEL_INFINITE",
]
