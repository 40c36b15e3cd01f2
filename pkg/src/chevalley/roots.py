"""Reduced irreducible root systems in simple-root coordinates.

Roots are integer tuples ``(n_1, ..., n_l)`` meaning ``sum n_i a_i``.  The
Cartan matrix is stored as ``cartan[i][j] = <a_i, a_j^vee>``, so the pairing
of an arbitrary root with a simple coroot is a row-vector product.

Root permutations are tuples of indices into ``RootSystem.roots``; a Weyl
word ``(i_1, ..., i_k)`` denotes ``s_{i_1} s_{i_2} ... s_{i_k}`` (the leftmost
reflection is applied last).
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidType, NotAnAutomorphism, NotARoot, ProportionalRoots

Root = tuple
Perm = tuple

MAX_RANK = 8


def _diagram(kind: str, rank: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Squared lengths of simple roots and the Dynkin edges (0-based)."""
    chain = [(i, i + 1) for i in range(rank - 1)]
    if kind == "A" and rank >= 1:
        return [2] * rank, chain
    if kind == "B" and rank >= 2:
        return [4] * (rank - 1) + [2], chain
    if kind == "C" and rank >= 2:
        return [2] * (rank - 1) + [4], chain
    if kind == "D" and rank >= 4:
        return [2] * rank, [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    if kind == "E" and rank in (6, 7, 8):
        edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, rank - 1)]
        return [2] * rank, edges
    if kind == "F" and rank == 4:
        return [4, 4, 2, 2], chain
    if kind == "G" and rank == 2:
        return [2, 6], chain
    raise InvalidType(f"no reduced irreducible root system {kind}{rank}")


def cartan_matrix(kind: str, rank: int) -> list[list[int]]:
    lengths, edges = _diagram(kind, rank)
    gram = _gram(lengths, edges)
    return [[2 * gram[i][j] // lengths[j] for j in range(rank)] for i in range(rank)]


def _gram(lengths, edges):
    l = len(lengths)
    gram = [[0] * l for _ in range(l)]
    for i in range(l):
        gram[i][i] = lengths[i]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -max(lengths[i], lengths[j]) // 2
    return gram


def _order_key(root: Root):
    # height first, then a1-heavy roots before a2-heavy roots
    return (sum(root), tuple(-c for c in root))


class RootSystem:
    """A root system of type ``kind`` and rank ``rank`` (see module docstring)."""

    def __init__(self, kind: str, rank: int):
        if rank < 1 or rank > MAX_RANK:
            raise InvalidType(f"rank {rank} outside 1..{MAX_RANK}")
        self.kind = kind
        self.rank = rank
        self.lengths, edges = _diagram(kind, rank)
        self.gram = _gram(self.lengths, edges)
        self.cartan = [[2 * self.gram[i][j] // self.lengths[j] for j in range(rank)]
                       for i in range(rank)]
        self.positive = sorted(self._positive_roots(), key=_order_key)
        self.roots = self.positive + [neg(r) for r in self.positive]
        self.index = {r: k for k, r in enumerate(self.roots)}
        self.simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
        self._pair = self._pairing_table()

    def __repr__(self) -> str:
        return f"RootSystem({self.kind}{self.rank})"

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    def _positive_roots(self) -> list[Root]:
        # a + a_i is a root iff q > 0, where q = p - <a, a_i^vee> along the a_i-string
        simple = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        found = set(simple)
        layer = list(simple)
        while layer:
            nxt = []
            for r in layer:
                for i in range(self.rank):
                    p = 0
                    while add(r, scale(simple[i], -(p + 1))) in found:
                        p += 1
                    q = p - self.simple_pairing(r, i)
                    if q > 0:
                        s = add(r, simple[i])
                        if s not in found:
                            found.add(s)
                            nxt.append(s)
            layer = nxt
        return list(found)

    def _pairing_table(self) -> np.ndarray:
        g = np.array(self.gram, dtype=np.int64)
        vecs = np.array(self.roots, dtype=np.int64)
        inner = vecs @ g @ vecs.T
        norms = np.diag(inner)
        return (2 * inner) // norms[None, :]

    # -- queries -----------------------------------------------------------
    def is_root(self, r: Root) -> bool:
        return tuple(r) in self.index

    def _require(self, r: Root) -> Root:
        r = tuple(r)
        if r not in self.index:
            raise NotARoot(f"{r} is not a root of {self.name}")
        return r

    def simple_pairing(self, r: Root, i: int) -> int:
        """``<r, a_i^vee>`` for any integer vector ``r``."""
        return sum(c * self.cartan[k][i] for k, c in enumerate(r))

    def inner(self, a: Root, b: Root) -> int:
        """Invariant form scaled so that the shortest roots have squared length 2."""
        return sum(a[i] * self.gram[i][j] * b[j] for i in range(self.rank)
                   for j in range(self.rank) if a[i] and b[j])

    def pair(self, beta: Root, alpha: Root) -> int:
        """``<beta, alpha^vee>`` from the invariant form (table lookup)."""
        return int(self._pair[self.index[tuple(beta)], self.index[tuple(alpha)]])

    def pairing_table(self) -> np.ndarray:
        return self._pair

    def height(self, r: Root) -> int:
        return sum(r)

    def is_positive(self, r: Root) -> bool:
        return any(c > 0 for c in r)

    def is_long(self, r: Root) -> bool:
        return self.inner(r, r) == max(self.lengths)

    @property
    def highest_root(self) -> Root:
        return self.positive[-1]

    @property
    def highest_short_root(self) -> Root:
        short = min(self.lengths)
        return max((r for r in self.positive if self.inner(r, r) == short), key=_order_key)

    def coroot_coefficients(self, r: Root) -> tuple[Fraction, ...]:
        """``h_r`` in terms of ``h_1..h_l``: ``r^vee = sum n_i (a_i,a_i)/(r,r) a_i^vee``."""
        r = self._require(r)
        norm = self.inner(r, r)
        return tuple(Fraction(c * self.lengths[i], norm) for i, c in enumerate(r))

    def reflect(self, i: int, r: Root) -> Root:
        return add(r, scale(self.simple[i], -self.simple_pairing(r, i)))

    @functools.cached_property
    def simple_reflections(self) -> list[Perm]:
        return [tuple(self.index[self.reflect(i, r)] for r in self.roots)
                for i in range(self.rank)]

    def label(self, r: Root) -> str:
        return root_label(r)

    def parse(self, label: str) -> Root:
        return self._require(parse_root(label, self.rank))

    def to_json(self) -> dict:
        return {"type": self.kind, "rank": self.rank, "cartan": self.cartan,
                "roots": [list(r) for r in self.roots],
                "positive_count": len(self.positive)}


@functools.lru_cache(maxsize=None)
def build_root_system(kind: str, rank: int) -> RootSystem:
    kind = kind.upper()
    _diagram(kind, rank)
    return RootSystem(kind, rank)


# -- vector helpers ---------------------------------------------------------

def add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def scale(a: Root, k: int) -> Root:
    return tuple(k * x for x in a)


def neg(a: Root) -> Root:
    return tuple(-x for x in a)


_TERM = re.compile(r"([+-]?)(\d*)a(\d+)")


def root_label(r: Root) -> str:
    """``(1, 2)`` -> ``"a1+2a2"``; ``(-1, 0)`` -> ``"-a1"``."""
    out = ""
    for i, c in enumerate(r):
        if not c:
            continue
        sign = "-" if c < 0 else ("+" if out else "")
        mag = "" if abs(c) == 1 else str(abs(c))
        out += f"{sign}{mag}a{i + 1}"
    return out or "0"


def parse_root(label: str, rank: int) -> Root:
    text = label.replace(" ", "")
    pos = 0
    coeffs = [0] * rank
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise NotARoot(f"cannot parse root label {label!r}")
        i = int(m.group(3)) - 1
        if not 0 <= i < rank:
            raise NotARoot(f"index out of range in {label!r}")
        c = int(m.group(2) or 1)
        coeffs[i] += -c if m.group(1) == "-" else c
        pos = m.end()
    if pos != len(text) or pos == 0:
        raise NotARoot(f"cannot parse root label {label!r}")
    return tuple(coeffs)


# -- strings and pairings ---------------------------------------------------

def root_string(rs: RootSystem, alpha: Root, beta: Root) -> tuple[int, int]:
    """Largest ``p, q`` with ``beta - p*alpha, ..., beta + q*alpha`` all roots."""
    alpha, beta = rs._require(alpha), rs._require(beta)
    if beta == alpha or beta == neg(alpha):
        raise ProportionalRoots(f"{root_label(beta)} is proportional to {root_label(alpha)}")
    p = 0
    while rs.is_root(add(beta, scale(alpha, -(p + 1)))):
        p += 1
    q = 0
    while rs.is_root(add(beta, scale(alpha, q + 1))):
        q += 1
    return p, q


def cartan_pairing(rs: RootSystem, beta: Root, alpha: Root) -> int:
    """``<beta, alpha^vee>``, read off the alpha-string through beta as ``p - q``."""
    alpha, beta = rs._require(alpha), rs._require(beta)
    if beta == alpha:
        return 2
    if beta == neg(alpha):
        return -2
    p, q = root_string(rs, alpha, beta)
    return p - q


# -- Dynkin symmetries and Weyl words ---------------------------------------

def dynkin_symmetries(rs: RootSystem) -> list[Perm]:
    """All permutations ``d`` of simple indices with ``cartan[d(i)][d(j)] == cartan[i][j]``."""
    l = rs.rank
    a = rs.cartan
    out: list[Perm] = []

    def extend(prefix: list[int]) -> None:
        k = len(prefix)
        if k == l:
            out.append(tuple(prefix))
            return
        for c in range(l):
            if c in prefix:
                continue
            if all(a[k][j] == a[c][prefix[j]] and a[j][k] == a[prefix[j]][c] for j in range(k)):
                extend(prefix + [c])

    extend([])
    return out


def extend_symmetry(rs: RootSystem, delta: Sequence[int]) -> Perm:
    """The root permutation ``sum n_i a_i -> sum n_i a_{delta(i)}``."""
    out = []
    for r in rs.roots:
        img = [0] * rs.rank
        for i, c in enumerate(r):
            img[delta[i]] += c
        out.append(rs.index[tuple(img)])
    return tuple(out)


def compose(p: Perm, q: Perm) -> Perm:
    """``p o q``."""
    return tuple(p[k] for k in q)


def inverse_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for k, v in enumerate(p):
        out[v] = k
    return tuple(out)


def identity_perm(rs: RootSystem) -> Perm:
    return tuple(range(len(rs.roots)))


def weyl_permutation(rs: RootSystem, word: Sequence[int]) -> Perm:
    perm = identity_perm(rs)
    for i in reversed(word):
        perm = compose(rs.simple_reflections[i], perm)
    return perm


def preserves_pairing(rs: RootSystem, perm: Perm) -> bool:
    table = rs.pairing_table()
    p = np.asarray(perm)
    return bool(np.array_equal(table[np.ix_(p, p)], table))


def reduce_to_diagram_symmetry(rs: RootSystem, perm: Perm) -> tuple[tuple[int, ...], Perm]:
    """Write ``perm = w o delta`` with ``w`` a Weyl word and ``delta`` a diagram symmetry.

    Simple reflections are peeled off the left while some simple root has a
    negative preimage; each step lowers the length, so at most ``|Phi+|``
    steps occur.  The leftover fixes the positive system and is a symmetry.
    """
    perm = tuple(perm)
    if sorted(perm) != list(range(len(rs.roots))) or not preserves_pairing(rs, perm):
        raise NotAnAutomorphism("permutation does not preserve the Cartan pairing")
    npos = len(rs.positive)
    word: list[int] = []
    tau = perm
    for _ in range(npos + 1):
        inv = inverse_perm(tau)
        j = next((i for i in range(rs.rank) if inv[i] >= npos), None)
        if j is None:
            break
        tau = compose(rs.simple_reflections[j], tau)
        word.append(j)
    else:
        raise NotAnAutomorphism("length reduction did not terminate")
    delta = tuple(tau[i] for i in range(rs.rank))
    a = rs.cartan
    if (sorted(delta) != list(range(rs.rank))
            or any(a[delta[i]][delta[j]] != a[i][j] for i in range(rs.rank) for j in range(rs.rank))
            or extend_symmetry(rs, delta) != tau):
        raise NotAnAutomorphism("residual permutation is not a diagram symmetry")
    return tuple(word), delta


def word_to_json(word: Sequence[int]) -> list[str]:
    return [f"a{i + 1}" for i in word]


def word_from_json(items: Sequence[str], rank: int) -> tuple[int, ...]:
    out = []
    for s in items:
        r = parse_root(s, rank)
        if sorted(r) != [0] * (rank - 1) + [1]:
            raise NotARoot(f"{s!r} is not a simple root")
        out.append(r.index(1))
    return tuple(out)
