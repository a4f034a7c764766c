"""Cyclotomic polynomials and the ideals A_n = (x^n - 1), C_n = (Phi_n(x)).

A_n factors as the product of C_d over divisors d of n.  The
verification routines check the valuation trichotomy (the power of an
odd unramified prime P in C_n is delta at n = f, exactly 1 at p^i * f,
and 0 elsewhere), its ramified-prime variant, the coprime-index gcd
lemma, and split A_n into its square-free and powerful parts.

Prime exponents are always computed directly on elements with
`valuation`, never inferred from sibling factorizations, so the product
identity remains an independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from . import ratarith
from .errors import (
    IncompleteFactorization,
    NonAdmissibleBase,
    NotCoprimeIndices,
    ZeroIdeal,
)
from .primes import (
    PrimeIdeal,
    SplitKind,
    delta_alpha,
    multiplicative_order,
    primes_above,
    valuation,
)
from .quadfield import FieldElement, is_admissible_base


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending degree.

    Computed by exact polynomial division of x^n - 1 by Phi_d for every
    proper divisor d of n.
    """
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (remainder must vanish)."""
    out = [0] * (len(num) - len(den) + 1)
    rem = list(num)
    for i in range(len(out) - 1, -1, -1):
        c = rem[i + len(den) - 1]
        if c % den[-1]:
            raise ArithmeticError("inexact polynomial division")
        q = c // den[-1]
        out[i] = q
        if q:
            for j, dc in enumerate(den):
                rem[i + j] -= q * dc
    if any(rem):
        raise ArithmeticError("nonzero remainder in cyclotomic division")
    return out


def cyclotomic_value(x: FieldElement, n: int) -> tuple[FieldElement, int]:
    """Phi_n(x) by Horner evaluation, together with its absolute norm."""
    coeffs = cyclotomic_poly(n)
    acc = x.field.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc, acc.abs_norm()


@dataclass(frozen=True)
class IdealFactorization:
    """Sorted multiset of (prime ideal, exponent) with completeness data.

    residual_norm carries the unfactored remnant of the rational norm;
    when complete the reconstruction prod N(P)^e equals the absolute
    norm of the generator.
    """

    items: tuple[tuple[PrimeIdeal, int], ...]
    complete: bool
    residual_norm: int = 1

    def norm(self) -> int:
        out = self.residual_norm
        for P, e in self.items:
            out *= P.norm**e
        return out

    def exponent(self, P: PrimeIdeal) -> int:
        for Q, e in self.items:
            if Q == P:
                return e
        return 0

    def support(self) -> tuple[PrimeIdeal, ...]:
        return tuple(P for P, _ in self.items)

    def is_unit_ideal(self) -> bool:
        return not self.items and self.complete

    def mul(self, other: "IdealFactorization") -> "IdealFactorization":
        exps: dict[PrimeIdeal, int] = {}
        for P, e in self.items + other.items:
            exps[P] = exps.get(P, 0) + e
        return _sorted_factorization(
            exps,
            self.complete and other.complete,
            self.residual_norm * other.residual_norm,
        )

    def gcd(self, other: "IdealFactorization") -> "IdealFactorization":
        exps = {}
        for P, e in self.items:
            eo = other.exponent(P)
            if eo:
                exps[P] = min(e, eo)
        return _sorted_factorization(exps, self.complete and other.complete, 1)


def _sorted_factorization(
    exps: dict[PrimeIdeal, int], complete: bool, residual: int
) -> IdealFactorization:
    items = tuple(
        (P, e) for P, e in sorted(exps.items(), key=lambda t: t[0].sort_key()) if e > 0
    )
    return IdealFactorization(items, complete, residual)


def factor_principal(
    x: FieldElement, budget: int = ratarith.DEFAULT_FACTOR_BUDGET
) -> IdealFactorization:
    """Prime-ideal factorization of the principal ideal (x), x != 0.

    Factors the rational norm, expands each rational prime to the
    primes above it, and assigns exponents by direct valuation.
    """
    if not x:
        raise ZeroIdeal("the zero element generates the zero ideal")
    nm = x.abs_norm()
    fac = ratarith.factor_integer(nm, budget)
    exps: dict[PrimeIdeal, int] = {}
    for p in fac.primes():
        for P in primes_above(x.field, p):
            e = valuation(x, P)
            if e:
                exps[P] = e
    return _sorted_factorization(exps, fac.complete, fac.cofactor)


def an_factorization(
    x: FieldElement, n: int, budget: int = ratarith.DEFAULT_FACTOR_BUDGET
) -> IdealFactorization:
    """Factorization of A_n = (x^n - 1) for an admissible base."""
    if not is_admissible_base(x):
        raise NonAdmissibleBase(f"{x!r} is zero or a root of unity")
    y = x**n - 1
    if not y:
        raise ZeroIdeal(f"x^{n} = 1")
    return factor_principal(y, budget)


@dataclass(frozen=True)
class UVSplit:
    """A_n = U_n * V_n with U_n square-free and V_n powerful."""

    U: IdealFactorization
    V: IdealFactorization
    complete: bool


def uv_split(
    x: FieldElement, n: int, budget: int = ratarith.DEFAULT_FACTOR_BUDGET
) -> UVSplit:
    """Partition the factorization of A_n by exponent 1 versus >= 2.

    An incomplete factorization yields an incomplete split; the residual
    norm is withheld from both parts.
    """
    an = an_factorization(x, n, budget)
    u = tuple((P, e) for P, e in an.items if e == 1)
    v = tuple((P, e) for P, e in an.items if e >= 2)
    return UVSplit(
        IdealFactorization(u, an.complete, 1),
        IdealFactorization(v, an.complete, 1),
        an.complete,
    )


def ideal_gcd_an(
    x: FieldElement, m: int, n: int, budget: int = ratarith.DEFAULT_FACTOR_BUDGET
) -> IdealFactorization:
    """gcd(A_m, A_n) for coprime m, n: contractually the ideal (x - 1)."""
    if gcd(m, n) != 1:
        raise NotCoprimeIndices(f"gcd({m}, {n}) != 1")
    am = an_factorization(x, m, budget)
    an = an_factorization(x, n, budget)
    if not (am.complete and an.complete):
        raise IncompleteFactorization(
            f"A_{m} or A_{n} did not factor completely; gcd would be unsound"
        )
    return am.gcd(an)


def _trichotomy_expected(n: int, p: int, f: int, delta: int) -> int:
    if n == f:
        return delta
    if n % f == 0:
        m = n // f
        while m % p == 0:
            m //= p
        if m == 1 and n != f:
            return 1
    return 0


def verify_valuation_trichotomy(
    x: FieldElement,
    P: PrimeIdeal,
    n_max: int,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
) -> list[dict]:
    """Check ord_P(C_n) against the three-case formula for n <= n_max.

    P must be odd and unramified with x not in P.  Each actual order is
    computed by direct valuation of Phi_n(x); rows report
    {n, p, conj, expected, actual, status}.
    """
    if P.p == 2 or P.kind is SplitKind.RAMIFIED:
        raise ValueError("trichotomy applies to odd unramified primes only")
    f = multiplicative_order(x, P, budget)
    delta = delta_alpha(x, P, budget)
    rows = []
    for n in range(1, n_max + 1):
        value, _ = cyclotomic_value(x, n)
        actual = valuation(value, P) if value else None
        expected = _trichotomy_expected(n, P.p, f, delta)
        rows.append(
            {
                "n": n,
                "p": P.p,
                "conj": P.conj_flag,
                "expected": expected,
                "actual": actual,
                "status": "OK" if actual == expected else "VIOLATION",
            }
        )
    return rows


def verify_ramified_inequality(
    x: FieldElement,
    P: PrimeIdeal,
    n_max: int,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
) -> list[dict]:
    """Ramified variant: ord_P(C_{p^i f}) >= 2 for i >= 1, exact delta at
    i = 0, and 0 off the p^i f progression."""
    if P.kind is not SplitKind.RAMIFIED or P.p == 2:
        raise ValueError("expected an odd ramified prime")
    f = multiplicative_order(x, P, budget)
    delta = delta_alpha(x, P, budget)
    rows = []
    for n in range(1, n_max + 1):
        value, _ = cyclotomic_value(x, n)
        actual = valuation(value, P) if value else None
        if n == f:
            ok = actual == delta
            expected = str(delta)
        elif _trichotomy_expected(n, P.p, f, 1) == 1:
            ok = actual is not None and actual >= 2
            expected = ">=2"
        else:
            ok = actual == 0
            expected = "0"
        rows.append(
            {
                "n": n,
                "p": P.p,
                "conj": P.conj_flag,
                "expected": expected,
                "actual": actual,
                "status": "OK" if ok else "VIOLATION",
            }
        )
    return rows
