"""Structure-constant magnitudes from the classical matrix models.

``sl_{l+1}``, ``so_{2l+1}``, ``sp_{2l}`` and ``so_{2l}`` are realised as
matrices preserving an antidiagonal form ``J``.  Root vectors are weight
vectors for the diagonal torus; their weights are converted to simple-root
coordinates using the usual epsilon description of each simple system.
None of this uses root strings, so it serves as an independent check on the
structure table.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import Unsupported
from .roots import Root

Mat = list


def _zeros(n: int) -> Mat:
    return [[Fraction(0)] * n for _ in range(n)]


def _mul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    out = _zeros(n)
    for i in range(n):
        ai = a[i]
        for k in range(n):
            if ai[k]:
                bk = b[k]
                v = ai[k]
                row = out[i]
                for j in range(n):
                    if bk[j]:
                        row[j] += v * bk[j]
    return out


def _comm(a: Mat, b: Mat) -> Mat:
    ab, ba = _mul(a, b), _mul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def _unit(n: int, a: int, b: int) -> Mat:
    m = _zeros(n)
    m[a][b] = Fraction(1)
    return m


def _is_zero(m: Mat) -> bool:
    return not any(v for row in m for v in row)


def _ratio(a: Mat, b: Mat) -> Fraction:
    """``c`` with ``a == c * b`` (b nonzero); raises if not proportional."""
    n = len(a)
    c = None
    for i in range(n):
        for j in range(n):
            if b[i][j]:
                c = a[i][j] / b[i][j]
                break
        if c is not None:
            break
    if c is None or any(a[i][j] != c * b[i][j] for i in range(n) for j in range(n)):
        raise ArithmeticError("matrices are not proportional")
    return c


def _model(kind: str, l: int):
    """Size, form J, and the epsilon weight of each diagonal position."""
    if kind == "A":
        n = l + 1
        return n, None, [tuple(int(i == k) for i in range(n)) for k in range(n)]
    if kind == "B":
        n = 2 * l + 1
    elif kind in ("C", "D"):
        n = 2 * l
    else:
        raise Unsupported(f"no classical matrix model for type {kind}")
    j = _zeros(n)
    for a in range(n):
        b = n - 1 - a
        j[a][b] = Fraction(-1 if (kind == "C" and a >= l) else 1)
    weights = []
    for a in range(n):
        w = [0] * l
        if a < l:
            w[a] = 1
        elif n - 1 - a < l:
            w[n - 1 - a] = -1
        weights.append(tuple(w))
    return n, j, weights


def _simple_in_eps(kind: str, l: int) -> list[tuple[int, ...]]:
    if kind == "A":
        dim = l + 1
    else:
        dim = l
    out = []
    for i in range(l - 1):
        v = [0] * dim
        v[i], v[i + 1] = 1, -1
        out.append(tuple(v))
    v = [0] * dim
    if kind == "A":
        v[l - 1], v[l] = 1, -1
    elif kind == "B":
        v[l - 1] = 1
    elif kind == "C":
        v[l - 1] = 2
    else:
        v[l - 2], v[l - 1] = 1, 1
    out.append(tuple(v))
    return out


def _to_simple(weight, simple) -> Root:
    """Solve ``weight = sum n_i simple_i`` by exact elimination."""
    l = len(simple)
    dim = len(weight)
    rows = [[Fraction(simple[i][k]) for i in range(l)] + [Fraction(weight[k])] for k in range(dim)]
    piv_row = 0
    pivots = []
    for c in range(l):
        p = next((r for r in range(piv_row, dim) if rows[r][c]), None)
        if p is None:
            continue
        rows[piv_row], rows[p] = rows[p], rows[piv_row]
        inv = 1 / rows[piv_row][c]
        rows[piv_row] = [v * inv for v in rows[piv_row]]
        for r in range(dim):
            if r != piv_row and rows[r][c]:
                f = rows[r][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[piv_row])]
        pivots.append(c)
        piv_row += 1
    if any(rows[r][l] for r in range(piv_row, dim)):
        raise ArithmeticError(f"weight {weight} is not in the root lattice")
    sol = [Fraction(0)] * l
    for r, c in enumerate(pivots):
        sol[c] = rows[r][l]
    if any(v.denominator != 1 for v in sol):
        raise ArithmeticError(f"weight {weight} is not an integral root combination")
    return tuple(int(v) for v in sol)


def root_vectors(kind: str, l: int) -> dict[Root, Mat]:
    """One root vector per root, in simple-root coordinates."""
    kind = kind.upper()
    n, j, weights = _model(kind, l)
    simple = _simple_in_eps(kind, l)
    # J has entries +-1 on the antidiagonal, so J^{-1} = J^T
    jinv = None if j is None else [[j[c][r] for c in range(n)] for r in range(n)]
    out: dict[Root, Mat] = {}
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            if j is None:
                y = _unit(n, a, b)
            else:
                # X^T J + J X = 0  <=>  X = -J^{-1} X^T J
                e = _unit(n, a, b)
                et = _unit(n, b, a)
                y = [[x - z for x, z in zip(r1, r2)]
                     for r1, r2 in zip(e, _mul(_mul(jinv, et), j))]
            if _is_zero(y):
                continue
            w = tuple(p - q for p, q in zip(weights[a], weights[b]))
            if not any(w):
                continue
            r = _to_simple(w, simple)
            out.setdefault(r, y)
    return out


def classical_oracle(kind: str, rank: int) -> dict[tuple[Root, Root], int]:
    """``|N_{a,b}|`` for every pair of roots with ``a + b`` a root."""
    kind = kind.upper()
    if kind not in "ABCD" or len(kind) != 1:
        raise Unsupported(f"no classical matrix model for type {kind}")
    vecs = root_vectors(kind, rank)
    positive = [r for r in vecs if any(c > 0 for c in r)]
    # normalise X_{-a} so that [X_a, X_{-a}] acts on X_a by 2
    for r in positive:
        nr = tuple(-c for c in r)
        h = _comm(vecs[r], vecs[nr])
        val = _ratio(_comm(h, vecs[r]), vecs[r])
        vecs[nr] = [[v * 2 / val for v in row] for row in vecs[nr]]
    out: dict[tuple[Root, Root], int] = {}
    for a in vecs:
        for b in vecs:
            s = tuple(x + y for x, y in zip(a, b))
            if s not in vecs:
                continue
            c1 = _ratio(_comm(vecs[a], vecs[b]), vecs[s])
            na, nb = tuple(-x for x in a), tuple(-x for x in b)
            c2 = _ratio(_comm(vecs[na], vecs[nb]), vecs[tuple(-x for x in s)])
            sq = -c1 * c2
            if sq.denominator != 1 or math.isqrt(sq.numerator) ** 2 != sq.numerator:
                raise ArithmeticError(f"|N|^2 = {sq} is not a square")
            out[(a, b)] = math.isqrt(sq.numerator)
    return out
