"""Heights, ramified supports, and the abc quality statistic.

Every real-valued output carries a rigorous enclosure: embeddings are
exact rational intervals built from integer square roots, products and
maxima stay exact, and only final roots and logarithms round (outward).
Inequality checks always compare against the conservative side of an
enclosure, so a reported PASS is a proof at the stated precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import ratarith
from ._enclosure import RatInterval, log_ratio_interval, sqrt_int_interval, sqrt_interval
from .cyclotomic import IdealFactorization, an_factorization, factor_principal
from .errors import IncompleteFactorization, ZeroElement
from .primes import primes_above, valuation
from .quadfield import BasisKind, FieldContext, FieldElement

DEFAULT_PRECISION = 128
_GUARD_BITS = 16


@dataclass(frozen=True)
class HeightValue:
    """A height with rigorous lower/upper bounds."""

    lower: Fraction
    upper: Fraction
    precision_bits: int

    @property
    def value(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class SupportValue:
    """A ramified-support product; q = 1 for the empty product."""

    q: int
    complete: bool


def _omega_interval(F: FieldContext, conj: bool, bits: int) -> RatInterval:
    """Enclosure of (the real embedding of) omega or its conjugate."""
    s = sqrt_int_interval(abs(F.d), bits)
    if conj:
        s = -s
    if F.basis_kind is BasisKind.OMEGA:
        return (s + 1) * Fraction(1, 2)
    return s


def infinite_place_values(x: FieldElement, bits: int) -> list[RatInterval]:
    """Normalized absolute values ||x||_v at the infinite places.

    Real field: two real places with ||x||_v = |sigma(x)|.  Imaginary
    field: one complex place with ||x||_v = |x|^2 = N(x), exactly.

    The sqrt(d) enclosure carries extra bits matching the size of the
    omega coordinate: a + b*omega can cancel to order 1 even when b is
    huge (conjugates of unit powers), and the absolute error b * 2^-bits
    must stay below the requested precision of the small value.
    """
    F = x.field
    if F.d < 0:
        return [RatInterval.point(x.abs_norm())]
    eff = bits + abs(x.b).bit_length() + 8
    out = []
    for conj in (False, True):
        w = _omega_interval(F, conj, eff)
        out.append(abs(RatInterval.point(x.a) + w * x.b))
    return out


def abs_height(x: FieldElement, precision: int = DEFAULT_PRECISION) -> HeightValue:
    """Absolute multiplicative height of a nonzero integral element:
    the degree-normalized product over places of max(1, ||x||_v)."""
    if not x:
        raise ZeroElement("height of 0 is undefined")
    bits = precision + _GUARD_BITS
    prod = RatInterval.point(1)
    for v in infinite_place_values(x, bits):
        prod = prod * v.max_with(1)
    root = sqrt_interval(prod, bits)
    return HeightValue(root.lo, root.hi, precision)


def _finite_part_triple(
    a: FieldElement, b: FieldElement, c: FieldElement, budget: int
) -> Fraction:
    """Product over finite places of max(||a||, ||b||, ||c||) for
    integral elements: N(P)^(-min of the three valuations)."""
    if any(e.abs_norm() == 1 for e in (a, b, c)):
        return Fraction(1)  # some coordinate is a unit at every finite place
    g = gcd(gcd(a.abs_norm(), b.abs_norm()), c.abs_norm())
    if g == 1:
        return Fraction(1)
    fac = ratarith.factor_integer(g, budget)
    if not fac.complete:
        raise IncompleteFactorization(
            "finite places of the triple require factoring the norm gcd"
        )
    out = Fraction(1)
    for p in fac.primes():
        for P in primes_above(a.field, p):
            m = min(valuation(a, P), valuation(b, P), valuation(c, P))
            if m:
                out /= Fraction(P.norm) ** m
    return out


def triple_height(
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    precision: int = DEFAULT_PRECISION,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
) -> HeightValue:
    """Tuple height: product over all places of the largest of the three
    normalized absolute values.

    For triples containing a unit the finite part is exactly 1; the
    general finite part is computed from factorizations.
    """
    if not (a and b and c):
        raise ZeroElement("tuple height requires nonzero entries")
    bits = precision + _GUARD_BITS
    va = infinite_place_values(a, bits)
    vb = infinite_place_values(b, bits)
    vc = infinite_place_values(c, bits)
    prod = RatInterval.point(_finite_part_triple(a, b, c, budget))
    for pa, pb, pc in zip(va, vb, vc):
        prod = prod * pa.max_with(pb).max_with(pc)
    return HeightValue(prod.lo, prod.hi, precision)


NOT_ALL_EQUAL = "NOT_ALL_EQUAL"
PAIRWISE_DISTINCT = "PAIRWISE_DISTINCT"


def _support_test(vals: tuple[int, int, int], strictness: str) -> bool:
    if strictness == PAIRWISE_DISTINCT:
        return len(set(vals)) == 3
    return len(set(vals)) > 1


def ramified_support(
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
    strictness: str = NOT_ALL_EQUAL,
) -> SupportValue:
    """prod N(P)^e(P|p) over primes where the triple's valuations meet
    the strictness test.

    The literal reading of the support condition ("all distinct") is
    available as PAIRWISE_DISTINCT; the default NOT_ALL_EQUAL matches
    the rational radical under the functorial degree identity.
    """
    facs = []
    for e in (a, b, c):
        if not e:
            raise ZeroElement("support requires nonzero entries")
        facs.append(ratarith.factor_integer(e.abs_norm(), budget))
    if not all(f.complete for f in facs):
        raise IncompleteFactorization("triple norms did not factor within budget")
    ps = sorted(set().union(*[set(f.primes()) for f in facs]))
    q = 1
    for p in ps:
        for P in primes_above(a.field, p):
            vals = (valuation(a, P), valuation(b, P), valuation(c, P))
            if _support_test(vals, strictness):
                q *= P.norm**P.e
    return SupportValue(q, True)


def support_of_ideal(I: IdealFactorization) -> SupportValue:
    """prod N(P)^e(P|p) over the distinct prime divisors of I."""
    q = 1
    for P, _ in I.items:
        q *= P.norm**P.e
    return SupportValue(q, I.complete)


@dataclass(frozen=True)
class AbcQuality:
    """Quality of the triple 1 + (x^n - 1) = x^n."""

    n: int
    height: HeightValue
    q_low: int
    q_high: int
    quality_low: float
    quality_high: float
    complete: bool


def abc_quality(
    x: FieldElement,
    n: int,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
    precision: int = DEFAULT_PRECISION,
) -> AbcQuality:
    """Height, support, and quality = log H / log(|disc| * Q) of the
    tautological abc triple (1, x^n - 1, x^n).

    The support factors as Q(x) * Q(x^n - 1) since the triple is
    pairwise coprime.  If the norm factorization is incomplete the
    quality is bracketed by treating the residual as fully square-free
    (every hidden prime contributing N^e, at most residual^2 in total)
    and as fully invisible.
    """
    an = an_factorization(x, n, budget)
    ax = factor_principal(x, budget)
    q_known = support_of_ideal(an).q * support_of_ideal(ax).q
    residual = an.residual_norm * ax.residual_norm
    complete = an.complete and ax.complete
    q_low, q_high = q_known, q_known * residual * residual
    h = triple_height(x.field.one(), x**n - 1, x**n, precision, budget)
    disc = abs(x.field.discriminant)
    prec = precision + _GUARD_BITS
    lo1, _ = log_ratio_interval(
        RatInterval(h.lower, h.upper), RatInterval.point(disc * q_high), prec
    )
    _, hi1 = log_ratio_interval(
        RatInterval(h.lower, h.upper), RatInterval.point(disc * q_low), prec
    )
    return AbcQuality(n, h, q_low, q_high, lo1, hi1, complete)


def ramified_constant(F: FieldContext) -> int:
    """prod p^2 over rational primes dividing the discriminant."""
    fac = ratarith.factor_integer(abs(F.discriminant))
    out = 1
    for p in fac.primes():
        out *= p * p
    return out


def verify_height_bounds(
    x: FieldElement,
    n_max: int,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
    precision: int = DEFAULT_PRECISION,
    an_cache: dict[int, IdealFactorization] | None = None,
) -> list[dict]:
    """Per-n height and support inequality report for the abc pipeline.

    For each n <= n_max with a complete factorization of A_n the row
    records, each compared on the conservative side of its enclosure:

    * max_norm_ok:     max norm of (1, x^n - 1, x^n) <= H_K of the triple
    * norm_growth_ok:  |N(x^n - 1)| <= 2 h(x)^n (1 + 2^(8 - precision)),
                       the bound in the stated form
    * norm_growth_degree_ok: |N(x^n - 1)| <= 2^places * h(x)^(n * degree),
                       the degree-corrected form of the same bound
    * support_u_ok:    Q(U_n) <= N(U_n)^2
    * support_v_ok:    Q(V_n)^2 <= A^2 * N(V_n) with A = prod_{p | disc} p^2

    Rows with incomplete factorizations are marked SKIPPED.
    """
    h = abs_height(x, precision)
    A = ramified_constant(x.field)
    tol = Fraction(1) + Fraction(1, 1 << (precision - 8))
    places = 1 if x.field.d < 0 else 2
    degree = 2
    rows = []
    for n in range(1, n_max + 1):
        an = (
            an_cache[n]
            if an_cache is not None and n in an_cache
            else an_factorization(x, n, budget)
        )
        if not an.complete:
            rows.append({"n": n, "status": "SKIPPED"})
            continue
        y = x**n - 1
        ny = y.abs_norm()
        ht = triple_height(x.field.one(), y, x**n, precision, budget)
        max_norm = max(1, ny, x.abs_norm() ** n)
        u = tuple((P, e) for P, e in an.items if e == 1)
        v = tuple((P, e) for P, e in an.items if e >= 2)
        qu = support_of_ideal(IdealFactorization(u, True)).q
        qv = support_of_ideal(IdealFactorization(v, True)).q
        nu = IdealFactorization(u, True).norm()
        nv = IdealFactorization(v, True).norm()
        rows.append(
            {
                "n": n,
                "status": "OK",
                "max_norm_ok": max_norm <= ht.lower,
                "norm_growth_ok": ny <= 2 * h.lower**n * tol,
                "norm_growth_degree_ok": ny
                <= (1 << places) * h.lower ** (n * degree) * tol,
                "support_u_ok": qu <= nu * nu,
                "support_v_ok": qv * qv <= A * A * nv,
            }
        )
    return rows
