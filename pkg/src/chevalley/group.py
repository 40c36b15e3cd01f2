"""Elements of the adjoint elementary Chevalley group as matrices on L(Phi, R).

A matrix ``M`` acts on column vectors in the Chevalley basis, so column ``k``
of ``M`` is the image of the ``k``-th basis vector.  Group elements built
from generators remember their word, which gives cheap exact inverses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import LieElement, StructureTable, ad_matrix, nilpotency_index
from .errors import DescriptorMismatch, ExponentTooLarge, NotUnipotent
from .matrix import Matrix
from .qmatrix import QMatrix
from .report import Report
from .rings import QQ, Poly, Ring, RingElement, as_fraction, element_to_json, invert, is_unit
from .roots import Root, neg, root_label

MAX_EXPONENT = 2 ** 20
MAX_TOWER_HEIGHT = 16

Word = tuple  # of (root, RingElement)


def _nil_powers(table: StructureTable, a: Root) -> list[QMatrix]:
    """``(ad x_a)^k / k!`` for ``k = 0 .. index - 1``."""
    key = ("expterms", tuple(a))
    if key not in table._cache:
        n = table.ad_x(a)
        terms = [QMatrix.identity(table.dim)]
        p = n
        k = 1
        while not p.is_zero():
            terms.append(p.scale(Fraction(1, math.factorial(k))))
            p = p @ n
            k += 1
        table._cache[key] = terms
    return table._cache[key]


def _to_ring(ring: Ring | None, r) -> RingElement:
    if isinstance(r, RingElement):
        return r if ring is None or r.ring == ring else ring.lift(r)
    return (ring or QQ)(r)


class GroupElement:
    """An invertible matrix on ``L(Phi, R)``, optionally with its generator word."""

    __slots__ = ("table", "matrix", "word", "_inv")

    def __init__(self, table: StructureTable, matrix: Matrix, word: Word | None = None):
        self.table = table
        self.matrix = matrix
        self.word = None if word is None else tuple(word)
        self._inv = None

    @property
    def ring(self) -> Ring:
        return self.matrix.ring

    @classmethod
    def identity(cls, table: StructureTable, ring: Ring = QQ) -> "GroupElement":
        return cls(table, Matrix.identity(ring, table.dim), ())

    @classmethod
    def from_word(cls, table: StructureTable, word: Sequence, ring: Ring | None = None) -> "GroupElement":
        if ring is None:
            ring = next((r.ring for _, r in word if isinstance(r, RingElement)), QQ)
        g = None
        for a, r in word:
            x = exp_generator(table, a, r, ring)
            g = x if g is None else g @ x
        return g if g is not None else cls.identity(table, ring)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        return GroupElement(self.table, self.matrix @ other.matrix, word)

    __mul__ = __matmul__

    def inverse(self) -> "GroupElement":
        if self._inv is None:
            if self.word is not None:
                inv_word = tuple((a, -r) for a, r in reversed(self.word))
                m = Matrix.identity(self.ring, self.table.dim)
                for a, r in inv_word:
                    m = m @ exp_generator(self.table, a, r, self.ring).matrix
                self._inv = GroupElement(self.table, m, inv_word)
            else:
                self._inv = GroupElement(self.table, self.matrix.inverse())
        return self._inv

    def __pow__(self, k: int) -> "GroupElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = GroupElement.identity(self.table, self.ring)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def conjugate(self, g: "GroupElement") -> "GroupElement":
        """``self g self^{-1}``."""
        return self @ g @ self.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def is_identity(self) -> bool:
        return self.matrix.is_identity()

    def det(self) -> RingElement:
        return self.matrix.det()

    def lift(self, ring: Ring) -> "GroupElement":
        word = None if self.word is None else tuple((a, ring.lift(r)) for a, r in self.word)
        return GroupElement(self.table, self.matrix.lift(ring), word)

    def __repr__(self) -> str:
        if self.word is not None:
            inner = " ".join(f"x[{root_label(a)}]({r})" for a, r in self.word)
            return f"GroupElement({inner or '1'})"
        return f"GroupElement({self.matrix!r})"

    def word_to_json(self) -> list | None:
        if self.word is None:
            return None
        return [[root_label(a), element_to_json(r)] for a, r in self.word]

    def to_json(self) -> dict:
        out = {"matrix": self.matrix.to_json()}
        if self.word is not None:
            out["word"] = self.word_to_json()
        return out


def exp_generator(table: StructureTable, a: Root, r, ring: Ring | None = None) -> GroupElement:
    """``x_a(r) = exp(ad(r x_a))``, a finite sum by nilpotency."""
    a = table.rs._require(a)
    r = _to_ring(ring, r)
    ring = r.ring
    dim = table.dim
    m = Matrix.zeros(ring, dim)
    power = ring.one()
    for term in _nil_powers(table, a):
        if power:
            m = m + Matrix.from_qmatrix(ring, term).scale(power)
        power = power * r
    return GroupElement(table, m, ((a, r),))


def _ad_gen_cache(table: StructureTable, ring: Ring, full: bool) -> list[tuple[int, Matrix]]:
    key = ("adgen", ring, full)
    if key not in table._cache:
        if full:
            idx = list(range(table.dim))
        else:
            idx = [table.x_index(s) for s in table.rs.simple] + [table.x_index(neg(s)) for s in table.rs.simple]
        table._cache[key] = [(k, Matrix.from_qmatrix(ring, table.ad_basis(k))) for k in idx]
    return table._cache[key]


def preserves_bracket(table: StructureTable, m: Matrix, full: bool = False) -> int | None:
    """First basis index ``k`` with ``ad(M e_k) M != M ad(e_k)``, or None.

    The elements ``x`` with ``M[x, y] = [Mx, My]`` for all ``y`` form a Lie
    subalgebra, so checking the generators ``x_{+-a_i}`` already suffices
    for an R-linear ``M``; ``full=True`` checks every basis vector.
    """
    for k, adk in _ad_gen_cache(table, m.ring, full):
        col = Matrix(m.ring, (table.dim, 1), {key: q.block(0, table.dim, k, k + 1)
                                               for key, q in m.comps.items()})
        if ad_matrix(LieElement(table, col)) @ m != m @ adk:
            return k
    return None


def is_lie_automorphism(table: StructureTable, m: Matrix | GroupElement, full: bool = False) -> bool:
    if isinstance(m, GroupElement):
        m = m.matrix
    if m.shape != (table.dim, table.dim):
        return False
    if not is_unit(m.det()):
        return False
    return preserves_bracket(table, m, full) is None


def weyl_torus_elements(table: StructureTable, a: Root, s, ring: Ring | None = None
                        ) -> tuple[GroupElement, GroupElement]:
    """``w_a(s) = x_a(s) x_{-a}(-s^{-1}) x_a(s)`` and ``h_a(s) = w_a(s) w_a(1)^{-1}``."""
    s = _to_ring(ring, s)
    sinv = invert(s)
    w = GroupElement.from_word(table, [(a, s), (neg(a), -sinv), (a, s)], s.ring)
    w1 = GroupElement.from_word(table, [(a, s.ring.one()), (neg(a), -s.ring.one()), (a, s.ring.one())])
    return w, w @ w1.inverse()


def w_element(table: StructureTable, a: Root, s=1, ring: Ring | None = None) -> GroupElement:
    return weyl_torus_elements(table, a, s, ring)[0]


def h_element(table: StructureTable, a: Root, s, ring: Ring | None = None) -> GroupElement:
    return weyl_torus_elements(table, a, s, ring)[1]


# -- Steinberg relations ----------------------------------------------------

STEINBERG_R = (1, -1, Fraction(1, 2), Fraction(-1, 2), 3)
STEINBERG_S = (2, 3, Fraction(1, 2))


def steinberg_roots(table: StructureTable) -> list[Root]:
    rs = table.rs
    out = list(rs.simple)
    for r in (rs.highest_root, rs.highest_short_root):
        if r not in out:
            out.append(r)
    return out


def verify_steinberg(table: StructureTable, rvals: Sequence = STEINBERG_R,
                     svals: Sequence = STEINBERG_S) -> Report:
    """(EX) additivity, h_a(s) x_b(r) h_a(s)^{-1} = x_b(s^<b,a^vee> r), and the
    conjugacy of x_a(r)^{s^2} with x_a(r) for integral ``s^2``."""
    rep = Report("steinberg", meta={"system": table.rs.name})
    roots = steinberg_roots(table)
    rvals = [Fraction(r) for r in rvals]
    svals = [Fraction(s) for s in svals]
    x = {(a, r): exp_generator(table, a, r) for a in roots for r in rvals}
    for a in roots:
        la = root_label(a)
        for r1 in rvals:
            for r2 in rvals:
                lhs = x[(a, r1)] @ x[(a, r2)]
                ok = lhs == exp_generator(table, a, r1 + r2)
                rep.record(ok, "EX", {"root": la, "r1": str(r1), "r2": str(r2)})
        w1, h_minus = w_element(table, a, 1), h_element(table, a, -1)
        rep.record(w1 @ w1 == h_minus, "w-square", {"root": la})
        for s in svals:
            _, h = weyl_torus_elements(table, a, s)
            hinv = h.inverse()
            rep.record(h.det() == QQ.one(), "h-det", {"root": la, "s": str(s)})
            for b in roots:
                k = table.rs.pair(b, a)
                for r in rvals:
                    conj = h @ x[(b, r)] @ hinv
                    ok = conj == exp_generator(table, b, s ** k * r)
                    check = "R5" if b == a else "R5-general"
                    rep.record(ok, check, {"root": la, "target": root_label(b), "s": str(s), "r": str(r)})
            s2 = s * s
            if s2.denominator == 1:
                for r in rvals:
                    ok = x[(a, r)] ** int(s2) == h @ x[(a, r)] @ hinv
                    rep.record(ok, "PC", {"root": la, "s": str(s), "r": str(r)})
    return rep.finish()


# -- unipotence certificate -------------------------------------------------

@dataclass
class Certificate:
    status: str  # "certified" | "hypothesis_failed" | "inconclusive"
    m: int | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "m": self.m, "detail": self.detail}


def lemma1_certificate(a: Matrix | GroupElement, p: int, q: int, d: int, m_max: int = 8) -> Certificate:
    """If det A = 1 and A, A^p, A^(q^d) share a characteristic polynomial,
    search for the least ``m <= m_max`` with ``(A - 1)^m = 0``."""
    if isinstance(a, GroupElement):
        a = a.matrix
    if p < 2 or q < 2 or d < 1 or m_max < 1:
        raise ValueError("need p >= 2, q >= 2, d >= 1, m_max >= 1")
    if p > MAX_EXPONENT or q > MAX_EXPONENT or d > MAX_TOWER_HEIGHT:
        raise ExponentTooLarge(f"p={p}, q={q}, d={d} exceeds the supported bounds")
    n = a.shape[0]
    ring = a.ring
    if a.det() != ring.one():
        return Certificate("hypothesis_failed", detail="det(A) != 1")
    cp = a.charpoly()
    if (a ** p).charpoly() != cp:
        return Certificate("hypothesis_failed", detail=f"charpoly(A) != charpoly(A^{p})")
    if (a ** (q ** d)).charpoly() != cp:
        return Certificate("hypothesis_failed", detail=f"charpoly(A) != charpoly(A^({q}^{d}))")
    nil = a - Matrix.identity(ring, n)
    pw = nil
    for m in range(1, m_max + 1):
        if pw.is_zero():
            return Certificate("certified", m)
        pw = pw @ nil
    return Certificate("inconclusive", detail=f"(A-1)^m != 0 for m <= {m_max}")


def unipotent_index(u: Matrix) -> int:
    """Least ``k`` with ``(U - 1)^k = 0``; raises NotUnipotent."""
    n = u.shape[0]
    nil = u - Matrix.identity(u.ring, n)
    pw = nil
    for k in range(1, n + 1):
        if pw.is_zero():
            return k
        pw = pw @ nil
    raise NotUnipotent("U - 1 is not nilpotent")


def binomial_poly(ring: Poly, k: int) -> RingElement:
    """``m (m - 1) ... (m - k + 1) / k!`` in ``ring``."""
    m = ring.gen()
    out = ring.one()
    for j in range(k):
        out = out * (m - j)
    return out * Fraction(1, math.factorial(k))


def unipotent_power_polynomial(u: Matrix | GroupElement, var: str = "m") -> Matrix:
    """``U^m = sum_k binom(m, k) (U - 1)^k`` as a matrix over ``R[m]``."""
    if isinstance(u, GroupElement):
        u = u.matrix
    idx = unipotent_index(u)
    ring = Poly(u.ring, var)
    n = u.shape[0]
    nil = u - Matrix.identity(u.ring, n)
    acc = Matrix.zeros(ring, n)
    pw = Matrix.identity(u.ring, n)
    for k in range(idx):
        acc = acc + pw.lift(ring).scale(binomial_poly(ring, k))
        pw = pw @ nil
    return acc


def evaluate_power_polynomial(poly: Matrix, m) -> Matrix:
    base = poly.ring.base
    return poly.substitute(base(as_fraction(m)) if not isinstance(m, RingElement) else m)


def verify_unipotence(table: StructureTable, samples: Sequence[GroupElement],
                      controls: Sequence[GroupElement] = (), p: int = 2, q: int = 3, d: int = 1,
                      m_max: int = 8) -> Report:
    """Certificates on unipotent samples (each re-checked directly) and on controls."""
    rep = Report("unipotence", meta={"system": table.rs.name, "p": p, "q": q, "d": d})
    n = table.dim
    observed = []
    for k, g in enumerate(samples):
        cert = lemma1_certificate(g, p, q, d, m_max)
        ok = cert.status == "certified"
        if ok:
            nil = g.matrix - Matrix.identity(g.ring, n)
            ok = (nil ** cert.m).is_zero() and (cert.m == 1 or not (nil ** (cert.m - 1)).is_zero())
            observed.append(cert.m)
        rep.record(ok, "certified", {"sample": k, "word": g.word_to_json()}, cert.detail)
    for k, g in enumerate(controls):
        cert = lemma1_certificate(g, p, q, d, m_max)
        rep.record(cert.status == "hypothesis_failed", "control", {"sample": k, "word": g.word_to_json()},
                   cert.status)
    if observed:
        rep.meta["max_m"] = max(observed)
    return rep.finish()


def verify_power_polynomial(table: StructureTable, samples: Sequence[GroupElement],
                            exponents: Sequence[int] = range(-2, 6)) -> Report:
    rep = Report("power-polynomial", meta={"system": table.rs.name})
    for k, g in enumerate(samples):
        poly = unipotent_power_polynomial(g)
        for m in exponents:
            ok = evaluate_power_polynomial(poly, m) == (g ** m).matrix
            rep.record(ok, "power", {"sample": k, "m": m, "word": g.word_to_json()})
    return rep.finish()


__all__ = [
    "GroupElement", "exp_generator", "is_lie_automorphism", "preserves_bracket",
    "weyl_torus_elements", "w_element", "h_element", "verify_steinberg", "Certificate",
    "lemma1_certificate", "unipotent_index", "unipotent_power_polynomial",
    "evaluate_power_polynomial", "verify_unipotence", "verify_power_polynomial", "nilpotency_index",
]
