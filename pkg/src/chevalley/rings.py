"""Exact coefficient rings: Q, Q^d, R[t] and R[t]/(t^k).

Every ring in the tower is a commutative Q-algebra with a monomial Q-basis
(idempotents e_i times powers t^j), and the product of two basis monomials
is either zero or another basis monomial.  Elements expose that basis through
``components`` so that matrix code can work over Q blockwise.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, ClassVar, Iterable, Sequence

from .errors import DescriptorMismatch, NotAUnit, Unsupported

MAX_DEPTH = 3
_NEUMANN_CAP = 256

Key = tuple


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not ring values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


class Ring:
    """Base class for ring descriptors.

    Subclasses are frozen dataclasses, so descriptors compare structurally and
    can be used as dictionary keys.  Arithmetic is implemented on raw payloads
    (``Fraction`` for Q, tuples otherwise) and wrapped by ``RingElement``.
    """

    kind: ClassVar[str] = ""

    # -- payload hooks -----------------------------------------------------
    def _zero(self): raise NotImplementedError
    def _one(self): raise NotImplementedError
    def _add(self, a, b): raise NotImplementedError
    def _neg(self, a): raise NotImplementedError
    def _mul(self, a, b): raise NotImplementedError
    def _inv(self, a): raise NotImplementedError
    def _scalar(self, q: Fraction): raise NotImplementedError
    def _components(self, a) -> dict: raise NotImplementedError
    def _from_components(self, comps: dict): raise NotImplementedError
    def _lift_payload(self, sub: "Ring", p): raise NotImplementedError
    def _str(self, p) -> str: raise NotImplementedError
    def key_mul(self, k1: Key, k2: Key) -> Key | None: raise NotImplementedError

    @property
    def depth(self) -> int:
        raise NotImplementedError

    @property
    def is_reduced(self) -> bool:
        raise NotImplementedError

    # -- public API --------------------------------------------------------
    def element(self, payload) -> "RingElement":
        return RingElement(self, payload)

    def zero(self) -> "RingElement":
        return RingElement(self, self._zero())

    def one(self) -> "RingElement":
        return RingElement(self, self._one())

    def __call__(self, value: Any) -> "RingElement":
        if isinstance(value, RingElement):
            return self.lift(value)
        return RingElement(self, self._scalar(as_fraction(value)))

    def lift(self, x: "RingElement") -> "RingElement":
        """Embed ``x`` from a ring this one is built on (Q -> Q^d diagonally)."""
        if x.ring == self:
            return x
        return RingElement(self, self._lift_payload(x.ring, x.payload))

    def contains(self, sub: "Ring") -> bool:
        try:
            self._lift_payload(sub, sub._zero())
        except DescriptorMismatch:
            return sub == self
        return True

    def basis_element(self, key: Key) -> "RingElement":
        return RingElement(self, self._from_components({key: Fraction(1)}))

    def from_components(self, comps: dict) -> "RingElement":
        return RingElement(self, self._from_components(comps))


def _check_depth(ring: Ring) -> None:
    if ring.depth > MAX_DEPTH:
        raise Unsupported(f"ring nesting depth {ring.depth} exceeds {MAX_DEPTH}")


@dataclass(frozen=True)
class Rationals(Ring):
    kind: ClassVar[str] = "rationals"

    @property
    def depth(self) -> int:
        return 0

    @property
    def is_reduced(self) -> bool:
        return True

    def _zero(self):
        return Fraction(0)

    def _one(self):
        return Fraction(1)

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        if a == 0:
            raise NotAUnit("0 is not invertible in Q")
        return 1 / a

    def _scalar(self, q):
        return q

    def _components(self, a):
        return {(): a} if a else {}

    def _from_components(self, comps):
        return Fraction(comps.get((), 0))

    def _lift_payload(self, sub, p):
        if sub == self:
            return p
        raise DescriptorMismatch(f"{sub} does not embed in Q")

    def key_mul(self, k1, k2):
        return ()

    def _str(self, p):
        return str(p)

    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class Product(Ring):
    """Finite direct product ``factor^d``."""

    d: int
    factor: Ring = Rationals()
    kind: ClassVar[str] = "product"

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("product needs d >= 1")
        _check_depth(self)

    @property
    def depth(self) -> int:
        return 1 + self.factor.depth

    @property
    def is_reduced(self) -> bool:
        return self.factor.is_reduced

    def _zero(self):
        return (self.factor._zero(),) * self.d

    def _one(self):
        return (self.factor._one(),) * self.d

    def _add(self, a, b):
        f = self.factor
        return tuple(f._add(x, y) for x, y in zip(a, b))

    def _neg(self, a):
        return tuple(self.factor._neg(x) for x in a)

    def _mul(self, a, b):
        f = self.factor
        return tuple(f._mul(x, y) for x, y in zip(a, b))

    def _inv(self, a):
        return tuple(self.factor._inv(x) for x in a)

    def _scalar(self, q):
        return (self.factor._scalar(q),) * self.d

    def _components(self, a):
        out = {}
        for i, x in enumerate(a):
            for k, v in self.factor._components(x).items():
                out[(i,) + k] = v
        return out

    def _from_components(self, comps):
        parts = [dict() for _ in range(self.d)]
        for k, v in comps.items():
            parts[k[0]][k[1:]] = v
        return tuple(self.factor._from_components(p) for p in parts)

    def _lift_payload(self, sub, p):
        if sub == self:
            return p
        c = p if sub == self.factor else self.factor._lift_payload(sub, p)
        return (c,) * self.d

    def key_mul(self, k1, k2):
        if k1[0] != k2[0]:
            return None
        rest = self.factor.key_mul(k1[1:], k2[1:])
        return None if rest is None else (k1[0],) + rest

    def _str(self, p):
        return "(" + ", ".join(self.factor._str(x) for x in p) + ")"

    def __str__(self) -> str:
        return f"Q{self.d}" if self.factor == Rationals() else f"({self.factor})^{self.d}"


@dataclass(frozen=True)
class _Graded(Ring):
    """Shared code for R[t] and R[t]/(t^k): payload = coefficient tuple."""

    base: Ring = Rationals()
    var: str = "t"

    @property
    def depth(self) -> int:
        return 1 + self.base.depth

    def _limit(self) -> int | None:
        return None

    def _canon(self, coeffs: Sequence) -> tuple:
        coeffs = list(coeffs)
        limit = self._limit()
        if limit is not None:
            del coeffs[limit:]
        z = self.base._zero()
        while coeffs and coeffs[-1] == z:
            coeffs.pop()
        return tuple(coeffs)

    def _zero(self):
        return ()

    def _one(self):
        return self._canon((self.base._one(),))

    def _add(self, a, b):
        base = self.base
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = base._add(out[i], y)
        return self._canon(out)

    def _neg(self, a):
        return tuple(self.base._neg(x) for x in a)

    def _mul(self, a, b):
        if not a or not b:
            return ()
        base = self.base
        n = len(a) + len(b) - 1
        limit = self._limit()
        if limit is not None:
            n = min(n, limit)
        out = [base._zero()] * n
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                if i + j >= n:
                    break
                out[i + j] = base._add(out[i + j], base._mul(x, y))
        return self._canon(out)

    def _scalar(self, q):
        return self._canon((self.base._scalar(q),))

    def _components(self, a):
        out = {}
        for j, c in enumerate(a):
            for k, v in self.base._components(c).items():
                out[(j,) + k] = v
        return out

    def _from_components(self, comps):
        if not comps:
            return ()
        n = 1 + max(k[0] for k in comps)
        parts = [dict() for _ in range(n)]
        for k, v in comps.items():
            parts[k[0]][k[1:]] = v
        return self._canon([self.base._from_components(p) for p in parts])

    def _lift_payload(self, sub, p):
        if sub == self:
            return p
        c = p if sub == self.base else self.base._lift_payload(sub, p)
        return self._canon((c,))

    def key_mul(self, k1, k2):
        j = k1[0] + k2[0]
        limit = self._limit()
        if limit is not None and j >= limit:
            return None
        rest = self.base.key_mul(k1[1:], k2[1:])
        return None if rest is None else (j,) + rest

    def gen(self) -> "RingElement":
        """The variable as an element."""
        return RingElement(self, self._canon((self.base._zero(), self.base._one())))

    def from_coeffs(self, coeffs: Iterable) -> "RingElement":
        """Build an element from ascending coefficients (values or base elements)."""
        return RingElement(self, self._canon([self.base(c).payload for c in coeffs]))

    def _inv_series(self, a, n: int):
        """First ``n`` coefficients of 1/a, given a unit constant term."""
        base = self.base
        a0inv = base._inv(a[0] if a else base._zero())
        out = [a0inv]
        for m in range(1, n):
            acc = base._zero()
            for i in range(1, min(m, len(a) - 1) + 1):
                acc = base._add(acc, base._mul(a[i], out[m - i]))
            out.append(base._neg(base._mul(a0inv, acc)))
        return out

    def _str(self, p):
        if not p:
            return "0"
        terms = []
        for j, c in enumerate(p):
            if c == self.base._zero():
                continue
            s = self.base._str(c)
            if " " in s:
                s = f"({s})"
            mono = "" if j == 0 else (self.var if j == 1 else f"{self.var}^{j}")
            if not mono:
                terms.append(s)
            elif s == "1":
                terms.append(mono)
            elif s == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"{s}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class Poly(_Graded):
    """Polynomial ring ``base[var]``."""

    kind: ClassVar[str] = "poly"

    def __post_init__(self):
        _check_depth(self)

    @property
    def is_reduced(self) -> bool:
        return self.base.is_reduced

    def _inv(self, a):
        if not a:
            raise NotAUnit("0 is not invertible")
        if len(a) == 1:
            return (self.base._inv(a[0]),)
        if self.base.is_reduced:
            raise NotAUnit(f"nonconstant polynomial {self._str(a)} is not a unit")
        # unit iff a0 is a unit and the rest is nilpotent: the series terminates
        out = self._inv_series(a, _NEUMANN_CAP * len(a))
        cand = self._canon(out)
        if len(cand) >= _NEUMANN_CAP * len(a) - 1 or self._mul(cand, a) != self._one():
            raise NotAUnit(f"{self._str(a)} is not a unit")
        return cand

    def __str__(self) -> str:
        return f"{self.base}[{self.var}]"


@dataclass(frozen=True)
class Truncated(_Graded):
    """Truncated polynomial ring ``base[var]/(var^order)``."""

    order: int = 3
    kind: ClassVar[str] = "truncated"

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("truncation order must be >= 1")
        _check_depth(self)

    @property
    def is_reduced(self) -> bool:
        return self.order == 1 and self.base.is_reduced

    def _limit(self) -> int:
        return self.order

    def _inv(self, a):
        if not a:
            raise NotAUnit("0 is not invertible")
        try:
            return self._canon(self._inv_series(a, self.order))
        except NotAUnit:
            raise NotAUnit(f"constant term of {self._str(a)} is not a unit") from None

    def __str__(self) -> str:
        return f"{self.base}[{self.var}]/({self.var}^{self.order})"


QQ = Rationals()


@functools.total_ordering
class RingElement:
    """An element of a ring descriptor, held in canonical form."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring: Ring, payload):
        self.ring = ring
        self.payload = payload

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                if self.ring.contains(other.ring):
                    return self.ring.lift(other)
                raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
            return other
        return self.ring(other)

    def _pair(self, other) -> tuple["RingElement", "RingElement"]:
        # an element of a subring is lifted, whichever side it is on
        if (isinstance(other, RingElement) and other.ring != self.ring
                and other.ring.contains(self.ring)):
            return other.ring.lift(self), other
        return self, self._coerce(other)

    def __add__(self, other):
        a, b = self._pair(other)
        return RingElement(a.ring, a.ring._add(a.payload, b.payload))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, self.ring._neg(self.payload))

    def __sub__(self, other):
        a, b = self._pair(other)
        return a + (-b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        a, b = self._pair(other)
        return RingElement(a.ring, a.ring._mul(a.payload, b.payload))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return invert(self) ** (-n)
        result, base = self.ring.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        a, b = self._pair(other)
        return a * invert(b)

    def __rtruediv__(self, other):
        return self._coerce(other) * invert(self)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.payload == other.payload
        try:
            return self.payload == self.ring(other).payload
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        # total order only for Q, used by sorting in reports
        if self.ring != QQ:
            return NotImplemented
        return self.payload < self._coerce(other).payload

    def __hash__(self):
        return hash((self.ring, self.payload))

    def __bool__(self):
        return self.payload != self.ring._zero()

    def is_zero(self) -> bool:
        return not self

    def components(self) -> dict:
        return self.ring._components(self.payload)

    @property
    def coeffs(self) -> tuple["RingElement", ...]:
        """Ascending coefficients for polynomial and truncated elements."""
        base = self.ring.base
        return tuple(RingElement(base, c) for c in self.payload)

    @property
    def parts(self) -> tuple["RingElement", ...]:
        """Coordinates of a product element."""
        f = self.ring.factor
        return tuple(RingElement(f, c) for c in self.payload)

    @property
    def degree(self) -> int:
        return len(self.payload) - 1

    def __repr__(self):
        return f"RingElement({self.ring}, {self})"

    def __str__(self):
        return self.ring._str(self.payload)


def invert(a: RingElement) -> RingElement:
    """Multiplicative inverse; raises ``NotAUnit`` for non-units."""
    return RingElement(a.ring, a.ring._inv(a.payload))


def is_unit(a: RingElement) -> bool:
    try:
        invert(a)
    except NotAUnit:
        return False
    return True


def primitive_idempotents(ring: Ring) -> list[RingElement]:
    """All primitive idempotents; they are orthogonal and sum to one."""
    if isinstance(ring, Rationals):
        return [ring.one()]
    if isinstance(ring, Product):
        out = []
        for i in range(ring.d):
            for e in primitive_idempotents(ring.factor):
                payload = [ring.factor._zero()] * ring.d
                payload[i] = e.payload
                out.append(RingElement(ring, tuple(payload)))
        return out
    if isinstance(ring, Truncated):
        # t is nilpotent, so idempotents are those of the base
        return [ring.lift(e) for e in primitive_idempotents(ring.base)]
    raise Unsupported(f"idempotents of {ring} are not enumerated")


def substitute(f: RingElement, g: RingElement) -> RingElement:
    """Evaluate the polynomial ``f`` at ``g`` (Horner), returning an element of g's ring."""
    if not isinstance(f.ring, Poly):
        raise DescriptorMismatch(f"{f.ring} is not a polynomial ring")
    target = g.ring
    base = f.ring.base
    if not target.contains(base):
        raise DescriptorMismatch(f"cannot substitute into {target}: {base} does not embed")
    acc = target.zero()
    for c in reversed(f.payload):
        acc = acc * g + target.lift(RingElement(base, c))
    return acc


# -- descriptor parsing / JSON -------------------------------------------

_RING_RE = re.compile(r"^\s*Q(?:\^?(\d+))?\s*((?:\[\w+'?\](?:/\(\w+'?\^\d+\))?)*)\s*$")
_EXT_RE = re.compile(r"\[(\w+'?)\](?:/\((\w+'?)\^(\d+)\))?")


def parse_ring(text: str) -> Ring:
    """Parse shorthand such as ``Q``, ``Q2``, ``Q^3``, ``Q[t]``, ``Q2[t]/(t^3)``."""
    m = _RING_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse ring {text!r}")
    ring: Ring = QQ
    if m.group(1):
        ring = Product(int(m.group(1)), QQ)
    for var, tvar, order in _EXT_RE.findall(m.group(2)):
        if tvar:
            if tvar != var:
                raise ValueError(f"truncation variable {tvar} differs from {var}")
            ring = Truncated(ring, var, int(order))
        else:
            ring = Poly(ring, var)
    return ring


def ring_to_json(ring: Ring) -> dict:
    if isinstance(ring, Rationals):
        return {"kind": "rationals"}
    if isinstance(ring, Product):
        return {"kind": "product", "d": ring.d, "factor": ring_to_json(ring.factor)}
    if isinstance(ring, Truncated):
        return {"kind": "truncated", "base": ring_to_json(ring.base), "var": ring.var,
                "order": ring.order}
    if isinstance(ring, Poly):
        return {"kind": "poly", "base": ring_to_json(ring.base), "var": ring.var}
    raise Unsupported(str(ring))


def ring_from_json(obj: Any) -> Ring:
    if isinstance(obj, str):
        return parse_ring(obj)
    kind = obj["kind"]
    if kind == "rationals":
        return QQ
    if kind == "product":
        return Product(int(obj["d"]), ring_from_json(obj.get("factor", {"kind": "rationals"})))
    if kind == "poly":
        return Poly(ring_from_json(obj["base"]), obj.get("var", "t"))
    if kind == "truncated":
        return Truncated(ring_from_json(obj["base"]), obj.get("var", "t"), int(obj["order"]))
    raise ValueError(f"unknown ring kind {kind!r}")


def fraction_to_json(q: Fraction) -> str:
    return str(q)


def element_to_json(x: RingElement):
    ring = x.ring
    if isinstance(ring, Rationals):
        return fraction_to_json(x.payload)
    if isinstance(ring, Product):
        return [element_to_json(p) for p in x.parts]
    return {"var": ring.var, "coeffs": [element_to_json(c) for c in x.coeffs]}


def element_from_json(ring: Ring, obj) -> RingElement:
    if isinstance(ring, Rationals):
        return ring(obj)
    if isinstance(ring, Product):
        if not isinstance(obj, list):
            return ring(obj)
        if len(obj) != ring.d:
            raise ValueError(f"expected {ring.d} coordinates, got {len(obj)}")
        return RingElement(ring, tuple(element_from_json(ring.factor, o).payload for o in obj))
    if isinstance(obj, dict):
        if obj.get("var", ring.var) != ring.var:
            raise DescriptorMismatch(f"variable {obj['var']} is not {ring.var}")
        return ring.from_coeffs(element_from_json(ring.base, c) for c in obj["coeffs"])
    return ring(obj)
