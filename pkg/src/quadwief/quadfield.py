"""Exact arithmetic in the ring of integers of Q(sqrt(d)).

Elements are stored in integral-basis coordinates (a, b) meaning
a + b*omega, where omega = (1+sqrt(d))/2 when d = 1 mod 4 and
omega = sqrt(d) otherwise.  This keeps every element a unique pair of
plain integers; the (t + u*sqrt(d))/2 view used for fundamental units
is derived on demand.

The fundamental unit of a real field is computed by the continued
fraction (PQa) expansion of omega, with an exhaustive Pell search as an
independent oracle.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from math import isqrt

from . import ratarith
from .errors import (
    DegenerateD,
    FieldMismatch,
    ImaginaryField,
    NonIntegral,
    NotSquarefree,
    ParseError,
    PeriodOverflow,
)

PQA_DEFAULT_CAP = 10_000_000


class BasisKind(Enum):
    OMEGA = "omega"  # omega = (1 + sqrt d)/2, d = 1 mod 4
    SQRT = "sqrt"    # omega = sqrt d


@dataclass(frozen=True)
class FieldContext:
    """The quadratic field Q(sqrt d) for squarefree d not in {0, 1}."""

    d: int
    delta: int
    discriminant: int
    basis_kind: BasisKind

    def omega_square(self) -> tuple[int, int]:
        """Coordinates of omega^2: omega^2 = c0 + c1*omega."""
        if self.basis_kind is BasisKind.OMEGA:
            return (self.d - 1) // 4, 1
        return self.d, 0

    def one(self) -> "FieldElement":
        return FieldElement(self, 1, 0)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0, 0)

    def element(self, a: int, b: int = 0) -> "FieldElement":
        return FieldElement(self, a, b)

    def from_sqrt_pair(self, x: int, y: int) -> "FieldElement":
        """Element (x + y*sqrt(d))/2, which must lie in O_K.

        Raises NonIntegral when the parity of (x, y) leaves the
        coordinates outside the integral basis.
        """
        if self.delta == 1:
            if (x - y) % 2:
                raise NonIntegral(f"({x} + {y}*sqrt({self.d}))/2 is not integral")
            return FieldElement(self, (x - y) // 2, y)
        if x % 2 or y % 2:
            raise NonIntegral(f"({x} + {y}*sqrt({self.d}))/2 is not integral")
        return FieldElement(self, x // 2, y // 2)

    def __repr__(self):
        return f"FieldContext(d={self.d})"


def make_field(d: int) -> FieldContext:
    """Validated context for Q(sqrt d); d must be squarefree, not 0 or 1."""
    if d in (0, 1):
        raise DegenerateD(f"d = {d} does not define a quadratic field")
    fac = ratarith.factor_integer(abs(d))
    if not fac.complete:
        raise NotSquarefree(f"could not verify that {d} is squarefree")
    if any(e > 1 for e in fac.factors.values()):
        raise NotSquarefree(f"{d} is not squarefree")
    if d % 4 == 1:
        return FieldContext(d, 1, d, BasisKind.OMEGA)
    return FieldContext(d, 2, 4 * d, BasisKind.SQRT)


@dataclass(frozen=True)
class FieldElement:
    """a + b*omega in the integral basis of its FieldContext."""

    field: FieldContext
    a: int
    b: int

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, int):
            return FieldElement(self.field, other, 0)
        if isinstance(other, FieldElement):
            if other.field.d != self.field.d:
                raise FieldMismatch(
                    f"elements of Q(sqrt {self.field.d}) and Q(sqrt {other.field.d})"
                )
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        c0, c1 = self.field.omega_square()
        cross = self.a * o.b + self.b * o.a
        sq = self.b * o.b
        return FieldElement(self.field, self.a * o.a + sq * c0, cross + sq * c1)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            raise ValueError("negative exponents are not defined in O_K")
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def conjugate(self) -> "FieldElement":
        if self.field.basis_kind is BasisKind.OMEGA:
            # conj(omega) = 1 - omega
            return FieldElement(self.field, self.a + self.b, -self.b)
        return FieldElement(self.field, self.a, -self.b)

    def norm(self) -> int:
        a, b, d = self.a, self.b, self.field.d
        if self.field.basis_kind is BasisKind.OMEGA:
            return a * a + a * b + b * b * (1 - d) // 4
        return a * a - d * b * b

    def abs_norm(self) -> int:
        return abs(self.norm())

    def trace(self) -> int:
        if self.field.basis_kind is BasisKind.OMEGA:
            return 2 * self.a + self.b
        return 2 * self.a

    def sqrt_pair(self) -> tuple[int, int]:
        """(x, y) with self = (x + y*sqrt d)/2; always integral."""
        if self.field.basis_kind is BasisKind.OMEGA:
            return 2 * self.a + self.b, self.b
        return 2 * self.a, 2 * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"<{format_element(self)} in Q(sqrt {self.field.d})>"


def is_admissible_base(x: FieldElement) -> bool:
    """False iff x is zero or a root of unity of the field."""
    if not x:
        return False
    d = x.field.d
    if d > 0:
        return (x.a, x.b) not in ((1, 0), (-1, 0))
    if d == -1:
        return (x.a, x.b) not in ((1, 0), (-1, 0), (0, 1), (0, -1))
    if d == -3:
        return (x.a, x.b) not in (
            (1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1),
        )
    return (x.a, x.b) not in ((1, 0), (-1, 0))


@dataclass(frozen=True)
class UnitData:
    """Fundamental unit epsilon = (delta/2)(t + u*sqrt d).

    t, u solve t^2 - d u^2 = +-4 when delta = 1 and +-1 when delta = 2;
    unit_norm is the sign realized.
    """

    epsilon: FieldElement
    t: int
    u: int
    unit_norm: int


def _unit_from_tu(F: FieldContext, t: int, u: int) -> UnitData:
    if F.delta == 1:
        eps = F.from_sqrt_pair(t, u)
        norm = (t * t - F.d * u * u) // 4
    else:
        eps = F.element(t, u)
        norm = t * t - F.d * u * u
    return UnitData(eps, t, u, norm)


def fundamental_unit(F: FieldContext, cap: int = PQA_DEFAULT_CAP) -> UnitData:
    """Fundamental unit of O_K for d > 1 via the PQa expansion of omega.

    Iterates the continued fraction of omega; the convergent at the
    first return of Q to its initial value solves t^2 - d u^2 = +-4
    (delta = 1) or +-1 (delta = 2) minimally.
    """
    if F.d < 0:
        raise ImaginaryField(f"no fundamental unit for d = {F.d}")
    if F.d <= 1:
        raise ImaginaryField("fundamental unit requires d > 1")
    d = F.d
    if F.delta == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    Q0 = Q
    sq = isqrt(d)
    g2, g1 = -P, Q  # G_{-2} = -P0, G_{-1} = Q0
    b2, b1 = 1, 0   # B_{-2} = 1,   B_{-1} = 0
    for _ in range(cap):
        a = (P + sq) // Q
        g = a * g1 + g2
        b = a * b1 + b2
        P = a * Q - P
        Q = (d - P * P) // Q
        if Q == Q0:
            return _unit_from_tu(F, g, b)
        g2, g1 = g1, g
        b2, b1 = b1, b
    raise PeriodOverflow(
        f"no period within {cap} PQa steps for d = {d}", steps=cap
    )


def pell_oracle(F: FieldContext, u_bound: int) -> UnitData | None:
    """Exhaustive search for the smallest-u solution of the unit equation.

    Scans u = 1..u_bound for t^2 = d u^2 +- c (c = 4 or 1 matching the
    field's delta normalization), preferring the norm -1 solution at the
    first u where both signs give squares.  Returns None if nothing is
    found within the bound: the oracle never guesses.
    """
    if F.d <= 1:
        raise ImaginaryField("Pell search requires d > 1")
    d = F.d
    c = 4 if F.delta == 1 else 1
    for u in range(1, u_bound + 1):
        v = d * u * u
        if v > c:
            t = isqrt(v - c)
            if t * t == v - c:
                return _unit_from_tu(F, t, u)
        t = isqrt(v + c)
        if t * t == v + c:
            return _unit_from_tu(F, t, u)
    return None


_ELEMENT_RE = re.compile(
    r"^\s*([+-]?\d+)\s*(?:([+-])\s*(\d+)\s*\*\s*([ws]))?\s*$"
)


def parse_element(text: str, F: FieldContext) -> FieldElement:
    """Element literal: INT or INT (+|-) INT * (w|s).

    `w` is the integral-basis generator omega, `s` is sqrt(d); the
    s-form is converted to integral-basis coordinates (sqrt d = 2w - 1
    when d = 1 mod 4).
    """
    m = _ELEMENT_RE.match(text)
    if not m:
        pos = _first_mismatch(text)
        raise ParseError(f"cannot parse element literal {text!r}", position=pos)
    a = int(m.group(1))
    if m.group(2) is None:
        return FieldElement(F, a, 0)
    coeff = int(m.group(3))
    if m.group(2) == "-":
        coeff = -coeff
    if m.group(4) == "w":
        return FieldElement(F, a, coeff)
    # s-form: a + coeff*sqrt(d)
    if F.basis_kind is BasisKind.OMEGA:
        return FieldElement(F, a - coeff, 2 * coeff)
    return FieldElement(F, a, coeff)


def _first_mismatch(text: str) -> int:
    for i, ch in enumerate(text):
        if not (ch.isdigit() or ch in "+-*ws \t"):
            return i
    return len(text)


def format_element(x: FieldElement) -> str:
    """Canonical literal for x, inverse of parse_element."""
    if x.b == 0:
        return str(x.a)
    sym = "w" if x.field.basis_kind is BasisKind.OMEGA else "s"
    sign = "+" if x.b > 0 else "-"
    return f"{x.a}{sign}{abs(x.b)}*{sym}"
