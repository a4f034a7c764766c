"""Exact rational interval arithmetic with directed rounding.

Algebraic quantities (embeddings, place norms, heights before roots)
are kept as exact Fraction intervals; square roots round outward at a
requested bit precision via integer square roots, and logarithms are
delegated to mpmath's rigorous interval context.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from mpmath import iv


@dataclass(frozen=True)
class RatInterval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(q) -> "RatInterval":
        f = Fraction(q)
        return RatInterval(f, f)

    def __add__(self, other):
        o = _coerce(other)
        return RatInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        return RatInterval(self.lo - o.hi, self.hi - o.lo)

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __mul__(self, other):
        o = _coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RatInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RatInterval(Fraction(0), max(-self.lo, self.hi))

    def pow_int(self, n: int) -> "RatInterval":
        if n == 0:
            return RatInterval.point(1)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def max_with(self, other) -> "RatInterval":
        o = _coerce(other)
        return RatInterval(max(self.lo, o.lo), max(self.hi, o.hi))

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def width(self) -> Fraction:
        return self.hi - self.lo

    def __float__(self):
        return float(self.midpoint())


def _coerce(v) -> RatInterval:
    if isinstance(v, RatInterval):
        return v
    return RatInterval.point(v)


def sqrt_int_interval(n: int, bits: int) -> RatInterval:
    """Enclosure of sqrt(n) for n >= 0 with ~bits fractional bits."""
    if n < 0:
        raise ValueError("negative radicand")
    scale = 1 << bits
    s = isqrt(n << (2 * bits))
    lo = Fraction(s, scale)
    hi = Fraction(s + 1, scale) if s * s != n << (2 * bits) else lo
    return RatInterval(lo, hi)


def sqrt_interval(x: RatInterval, bits: int) -> RatInterval:
    """Outward-rounded square root of a nonnegative interval."""
    if x.lo < 0:
        raise ValueError("interval extends below zero")
    lo = _sqrt_frac_down(x.lo, bits)
    hi = _sqrt_frac_up(x.hi, bits)
    return RatInterval(lo, hi)


def _sqrt_frac_down(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    # floor(sqrt(q) * scale) >= isqrt(floor(q * scale^2))... use exact floor
    v = (q.numerator << (2 * bits)) // q.denominator
    return Fraction(isqrt(v), scale)


def _sqrt_frac_up(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    v = -((-q.numerator << (2 * bits)) // q.denominator)  # ceil
    s = isqrt(v)
    if s * s < v:
        s += 1
    return Fraction(s, scale)


def iv_from_fraction(q: Fraction):
    """Rigorous mpmath interval containing the rational q (at iv.prec)."""
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def log_ratio_interval(
    num: RatInterval, den: RatInterval, prec: int
) -> tuple[float, float]:
    """Enclosure of log(num)/log(den) as floats.

    Requires num >= 1 and den > 1, which makes the ratio monotone
    increasing in num and decreasing in den; endpoints are evaluated in
    mpmath's interval context (endpoint accessors are point intervals,
    so division stays outward-rounded).
    """
    if num.lo < 1 or den.lo <= 1:
        raise ValueError("log ratio needs num >= 1 and den > 1")
    old = iv.prec
    try:
        iv.prec = prec
        lo = iv.log(iv_from_fraction(num.lo)).a / iv.log(iv_from_fraction(den.hi)).b
        hi = iv.log(iv_from_fraction(num.hi)).b / iv.log(iv_from_fraction(den.lo)).a
        # conversion to double rounds to nearest; nudge outward to keep
        # the float pair a true enclosure
        return (
            math.nextafter(float(lo.a), -math.inf),
            math.nextafter(float(hi.b), math.inf),
        )
    finally:
        iv.prec = old
