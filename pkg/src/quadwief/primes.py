"""Prime ideals of a quadratic field and arithmetic in O_K / p^k.

Residue rings are kept in splitting-type normal forms:

* SPLIT: O_K/P^k is Z/p^k via omega -> lifted root of its minimal
  polynomial (for odd p this comes from the canonical Hensel square
  root of d; above 2 the omega-polynomial t^2 - t - (d-1)/4 is lifted
  directly since its derivative is odd).
* INERT: pairs over the integral basis with multiplication reduced by
  omega^2 = c0 + c1*omega mod p^k.
* RAMIFIED: sqrt(d) is a uniformizer, so O_K/P^k splits coordinates as
  (a mod p^ceil(k/2), b mod p^floor(k/2)) on the sqrt(d) view.  This
  covers odd p | d and also p = 2 when d = 2 mod 4; the remaining
  2-ramified case (d = 3 mod 4, where 1 + sqrt(d) uniformizes) only
  supports level 1.

Levels k <= 3 are all the Wieferich machinery needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import inf

from . import ratarith
from .errors import (
    BaseInIdeal,
    EvenRamified,
    IncompleteFactorization,
    NonAdmissibleBase,
    UnsupportedLevel,
)
from .quadfield import BasisKind, FieldContext, FieldElement, is_admissible_base

MAX_LEVEL = 3


class SplitKind(Enum):
    SPLIT = "SPLIT"
    INERT = "INERT"
    RAMIFIED = "RAMIFIED"


class WieferichClass(Enum):
    NON_WIEFERICH = "NON_WIEFERICH"
    WIEFERICH = "WIEFERICH"
    SUPER_WIEFERICH = "SUPER_WIEFERICH"


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of O_K above the rational prime p.

    For SPLIT primes over odd p, root is the level-1 square root of d
    defining the residue map; conjugates are ordered smaller root first.
    Above 2 (where x^2 - d does not separate the factors) it is the
    mod-2 root of the omega polynomial instead.
    """

    field: FieldContext
    p: int
    kind: SplitKind
    root: int | None
    conj_flag: int
    e: int
    norm: int

    def sort_key(self):
        return (self.p, self.conj_flag)

    def __repr__(self):
        tag = f",conj={self.conj_flag}" if self.kind is SplitKind.SPLIT else ""
        return f"PrimeIdeal(p={self.p},{self.kind.value}{tag} | d={self.field.d})"


def primes_above(F: FieldContext, p: int) -> list[PrimeIdeal]:
    """The primes of O_K above p: two split conjugates, one inert, or
    one ramified ideal.  p = 2 splits iff the discriminant is 1 mod 8."""
    if p == 2:
        if F.delta == 2:
            return [PrimeIdeal(F, 2, SplitKind.RAMIFIED, None, 0, 2, 2)]
        if F.d % 8 == 1:
            return [
                PrimeIdeal(F, 2, SplitKind.SPLIT, 0, 0, 1, 2),
                PrimeIdeal(F, 2, SplitKind.SPLIT, 1, 1, 1, 2),
            ]
        return [PrimeIdeal(F, 2, SplitKind.INERT, None, 0, 1, 4)]
    if F.d % p == 0:
        return [PrimeIdeal(F, p, SplitKind.RAMIFIED, None, 0, 2, p)]
    k = ratarith.kronecker(F.d, p)
    if k == 1:
        r = ratarith.hensel_sqrt(F.d, p, 1)
        return [
            PrimeIdeal(F, p, SplitKind.SPLIT, r, 0, 1, p),
            PrimeIdeal(F, p, SplitKind.SPLIT, p - r, 1, 1, p),
        ]
    return [PrimeIdeal(F, p, SplitKind.INERT, None, 0, 1, p * p)]


def all_primes_above(F: FieldContext, limit: int):
    """Yield the primes above every rational prime p <= limit, ordered
    by (p, conj_flag)."""
    for p in ratarith.primes_up_to(limit):
        yield from primes_above(F, p)


def _omega_from_sqrt(F: FieldContext, r: int, mod: int) -> int:
    """Residue of omega given the residue r of sqrt(d) mod an odd p^k."""
    if F.basis_kind is BasisKind.OMEGA:
        return (1 + r) * pow(2, -1, mod) % mod
    return r % mod


@lru_cache(maxsize=None)
def _omega_root_2(d: int, k: int, conj: int) -> int:
    """Root of t^2 - t - (d-1)/4 mod 2^k lifting the level-1 root conj.

    Only for d = 1 mod 8.  The derivative 2t - 1 is odd, so Newton
    lifting is unique at p = 2.
    """
    q = (d - 1) // 4
    r = conj
    mod = 2
    target = 1 << k
    while mod < target:
        mod = min(mod * mod, target)
        r = (r - (r * r - r - q) * pow(2 * r - 1, -1, mod)) % mod
    return r % target


def split_omega_root(P: PrimeIdeal, k: int) -> int:
    """Residue of omega mod p^k for a split prime, lifted on demand."""
    F = P.field
    if P.p == 2:
        return _omega_root_2(F.d, k, P.conj_flag)
    r = ratarith.hensel_sqrt(F.d, P.p, k)
    if P.conj_flag == 1:
        r = P.p**k - r
    return _omega_from_sqrt(F, r, P.p**k)


def _ramified_supported(P: PrimeIdeal, k: int) -> None:
    if P.p == 2 and P.field.d % 4 == 3 and k > 1:
        raise EvenRamified(
            "levels above 1 are unsupported for the ramified prime over 2 "
            f"in Q(sqrt {P.field.d})"
        )


def _sqrt_coords_mod(x: FieldElement, p: int, ka: int, kb: int) -> tuple[int, int]:
    """(x_a mod p^ka, x_b mod p^kb) with x = x_a + x_b*sqrt(d)."""
    if x.field.basis_kind is BasisKind.OMEGA:
        X, Y = x.sqrt_pair()  # x = (X + Y sqrt d)/2, p odd here
        inv2a = pow(2, -1, p**ka)
        inv2b = pow(2, -1, p**kb)
        return X * inv2a % p**ka, Y * inv2b % p**kb
    return x.a % p**ka, x.b % p**kb


@dataclass(frozen=True)
class ResidueClass:
    """An element of O_K/P^k in its splitting-type normal form."""

    ideal: PrimeIdeal
    k: int
    rep: tuple[int, ...]

    def is_one(self) -> bool:
        one = _one_rep(self.ideal, self.k)
        return self.rep == one

    def reduce(self, k: int) -> "ResidueClass":
        """Ring-homomorphic reduction to a lower level."""
        if k > self.k:
            raise UnsupportedLevel(f"cannot lift level {self.k} to {k}")
        P = self.ideal
        if P.kind is SplitKind.SPLIT:
            # level-k roots are lift-compatible, so plain reduction works
            return ResidueClass(P, k, (self.rep[0] % P.p**k,))
        if P.kind is SplitKind.INERT:
            m = P.p**k
            return ResidueClass(P, k, (self.rep[0] % m, self.rep[1] % m))
        ka, kb = (k + 1) // 2, k // 2
        xb = self.rep[1] % P.p**kb if kb else 0
        return ResidueClass(P, k, (self.rep[0] % P.p**ka, xb))


def _one_rep(P: PrimeIdeal, k: int) -> tuple[int, ...]:
    if P.kind is SplitKind.SPLIT:
        return (1 % P.p**k,)
    if P.kind is SplitKind.INERT:
        return (1 % P.p**k, 0)
    return (1, 0)


def _check_level(k: int) -> None:
    if not 1 <= k <= MAX_LEVEL:
        raise UnsupportedLevel(f"residue level {k} outside 1..{MAX_LEVEL}")


def residue(x: FieldElement, P: PrimeIdeal, k: int) -> ResidueClass:
    """Normal form of x in O_K/P^k."""
    _check_level(k)
    F = P.field
    p = P.p
    if P.kind is SplitKind.SPLIT:
        w = split_omega_root(P, k)
        return ResidueClass(P, k, ((x.a + x.b * w) % p**k,))
    if P.kind is SplitKind.INERT:
        m = p**k
        return ResidueClass(P, k, (x.a % m, x.b % m))
    _ramified_supported(P, k)
    ka, kb = (k + 1) // 2, k // 2
    if p == 2 and F.d % 4 == 3:
        # level 1 only: residue field F_2 via a + b*sqrt(d) -> a + b
        return ResidueClass(P, 1, ((x.a + x.b) % 2, 0))
    if kb == 0:
        xa, _ = _sqrt_coords_mod(x, p, ka, 1)
        return ResidueClass(P, k, (xa, 0))
    xa, xb = _sqrt_coords_mod(x, p, ka, kb)
    return ResidueClass(P, k, (xa, xb))


def _mul_rep(P: PrimeIdeal, k: int, u: tuple, v: tuple) -> tuple:
    p = P.p
    if P.kind is SplitKind.SPLIT:
        return (u[0] * v[0] % p**k,)
    if P.kind is SplitKind.INERT:
        m = p**k
        c0, c1 = P.field.omega_square()
        sq = u[1] * v[1]
        return (
            (u[0] * v[0] + sq * c0) % m,
            (u[0] * v[1] + u[1] * v[0] + sq * c1) % m,
        )
    ka, kb = (k + 1) // 2, k // 2
    ma = p**ka
    a = (u[0] * v[0] + u[1] * v[1] * P.field.d) % ma
    if kb == 0:
        return (a, 0)
    return (a, (u[0] * v[1] + u[1] * v[0]) % p**kb)


def residue_pow(x: FieldElement, e: int, P: PrimeIdeal, k: int) -> ResidueClass:
    """Class of x^e in O_K/P^k by square-and-multiply on normal forms."""
    if e < 0:
        raise ValueError("negative exponent")
    base = residue(x, P, k)
    acc = _one_rep(P, k)
    b = base.rep
    while e:
        if e & 1:
            acc = _mul_rep(P, k, acc, b)
        b = _mul_rep(P, k, b, b)
        e >>= 1
    return ResidueClass(P, k, acc)


def valuation(x: FieldElement, P: PrimeIdeal) -> int | float:
    """ord_P(x); infinity for x = 0."""
    if not x:
        return inf
    p = P.p
    if P.kind is SplitKind.INERT:
        return ratarith.v_p(x.abs_norm(), p) // 2
    if P.kind is SplitKind.SPLIT:
        cap = ratarith.v_p(x.abs_norm(), p)
        if cap == 0:
            return 0
        k = cap + 1
        w = split_omega_root(P, k)
        r = (x.a + x.b * w) % p**k
        if r == 0:
            return cap
        return min(ratarith.v_p(r, p), cap)
    # ramified
    if p == 2 and P.field.d % 4 == 3:
        return ratarith.v_p(x.abs_norm(), 2)
    if p == 2:
        xa, xb = x.a, x.b  # delta = 2 coordinates are sqrt(d) coordinates
    else:
        xa, xb = x.sqrt_pair()  # doubling is harmless at odd p
    if xa == 0:
        return 2 * ratarith.v_p(xb, p) + 1
    if xb == 0:
        return 2 * ratarith.v_p(xa, p)
    return min(2 * ratarith.v_p(xa, p), 2 * ratarith.v_p(xb, p) + 1)


def group_order_factorization(P: PrimeIdeal, budget: int) -> ratarith.FactorMap:
    """Factorization of #(O_K/P)^x = N(P) - 1.

    Inert orders factor as (p-1)(p+1), which keeps both halves small.
    """
    if P.kind is SplitKind.INERT:
        return ratarith.factor_integer(P.p - 1, budget).merge(
            ratarith.factor_integer(P.p + 1, budget)
        )
    return ratarith.factor_integer(P.norm - 1, budget)


def multiplicative_order(
    x: FieldElement, P: PrimeIdeal, budget: int = ratarith.DEFAULT_FACTOR_BUDGET
) -> int:
    """Order f of x in (O_K/P)^x.

    Factors the group order N(P)-1 and strips prime factors while the
    power stays 1.
    """
    if valuation(x, P) != 0:
        raise BaseInIdeal(f"{x!r} lies in {P!r}")
    fac = group_order_factorization(P, budget)
    if not fac.complete:
        raise IncompleteFactorization(
            f"N(P)-1 = {P.norm - 1} did not factor within budget"
        )
    o = P.norm - 1
    for q in fac.factors:
        while o % q == 0 and residue_pow(x, o // q, P, 1).is_one():
            o //= q
    return o


def delta_alpha(
    x: FieldElement, P: PrimeIdeal, budget: int = ratarith.DEFAULT_FACTOR_BUDGET
) -> int:
    """Exact power of P dividing x^f - 1 where f is the order of x mod P."""
    f = multiplicative_order(x, P, budget)
    return valuation(x**f - 1, P)


def wieferich_class(x: FieldElement, P: PrimeIdeal) -> WieferichClass:
    """Three-way classification of P for the base x.

    NON_WIEFERICH iff x^(N(P)-1) is not 1 mod P^2; SUPER_WIEFERICH iff
    it is 1 even mod P^3.
    """
    if not is_admissible_base(x):
        raise NonAdmissibleBase(f"{x!r} is zero or a root of unity")
    if valuation(x, P) != 0:
        raise BaseInIdeal(f"{x!r} lies in {P!r}")
    n = P.norm - 1
    if not residue_pow(x, n, P, 2).is_one():
        return WieferichClass.NON_WIEFERICH
    if residue_pow(x, n, P, 3).is_one():
        return WieferichClass.SUPER_WIEFERICH
    return WieferichClass.WIEFERICH
