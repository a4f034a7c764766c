"""Ankeny-Artin-Chowla / Mordell scanner.

For squarefree d > 2 with fundamental unit (delta/2)(t + u*sqrt d), the
conjectures say d does not divide u when d is prime.  The equivalence
under test: for each odd prime p | d, p | u exactly when
eps^(p-1) = 1 mod P^2 for the ramified prime P above p.  The two sides
are computed by disjoint code paths (integer arithmetic on u versus
residue arithmetic in O_K/P^2), which is the point of the cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from . import ratarith
from .errors import PeriodOverflow
from .primes import primes_above, residue_pow
from .quadfield import (
    PQA_DEFAULT_CAP,
    FieldContext,
    UnitData,
    fundamental_unit,
    make_field,
)

HOLDS = "HOLDS"
COUNTEREXAMPLE = "COUNTEREXAMPLE"
UNIT_UNAVAILABLE = "UNIT_UNAVAILABLE"

PRIMES_1MOD4 = "PRIMES_1MOD4"
PRIMES_3MOD4 = "PRIMES_3MOD4"
ALL_SQUAREFREE = "ALL_SQUAREFREE"


@dataclass(frozen=True)
class AacPrimeCheck:
    p: int
    u_mod_p: int
    wieferich_dual: bool
    consistent: bool


@dataclass(frozen=True)
class AacRecord:
    d: int
    delta: int
    unit: UnitData | None
    per_prime: tuple[AacPrimeCheck, ...]
    status: str

    @property
    def consistent(self) -> bool:
        return all(c.consistent for c in self.per_prime)


def _odd_prime_divisors(d: int) -> list[int]:
    fac = ratarith.factor_integer(d)
    return [p for p in fac.primes() if p != 2]


def aac_check(d: int, cap: int = PQA_DEFAULT_CAP) -> AacRecord:
    """Evaluate both sides of the equivalence for every odd p | d."""
    if d <= 2:
        raise ValueError("aac_check requires squarefree d > 2")
    F = make_field(d)
    try:
        unit = fundamental_unit(F, cap)
    except PeriodOverflow:
        return AacRecord(d, F.delta, None, (), UNIT_UNAVAILABLE)
    checks = []
    for p in _odd_prime_divisors(d):
        P = primes_above(F, p)[0]
        dual = residue_pow(unit.epsilon, p - 1, P, 2).is_one()
        u_mod = unit.u % p
        checks.append(AacPrimeCheck(p, u_mod, dual, (u_mod == 0) == dual))
    status = COUNTEREXAMPLE if any(c.u_mod_p == 0 for c in checks) else HOLDS
    return AacRecord(d, F.delta, unit, tuple(checks), status)


def _squarefree(n: int) -> bool:
    fac = ratarith.factor_integer(n)
    return fac.complete and all(e == 1 for e in fac.factors.values())


def aac_scan(
    d_min: int, d_max: int, mode: str = ALL_SQUAREFREE, cap: int = PQA_DEFAULT_CAP
) -> Iterator[AacRecord]:
    """Ordered stream of AAC records over a d range.

    PRIMES_1MOD4 and PRIMES_3MOD4 restrict to prime d in the given
    residue class (the AAC and Mordell settings); ALL_SQUAREFREE scans
    every squarefree d.  Per-record failures never abort the stream.
    """
    if not 2 < d_min <= d_max:
        raise ValueError("need 2 < d_min <= d_max")
    for d in range(d_min, d_max + 1):
        if mode == PRIMES_1MOD4:
            if d % 4 != 1 or not ratarith.is_probable_prime(d):
                continue
        elif mode == PRIMES_3MOD4:
            if d % 4 != 3 or not ratarith.is_probable_prime(d):
                continue
        elif not _squarefree(d):
            continue
        yield aac_check(d, cap)


@dataclass
class AacSummary:
    holds: int = 0
    counterexamples: int = 0
    unit_unavailable: int = 0
    inconsistent: int = 0
    heuristic_mass: float = 0.0  # sum of 1/p over checked (d, p) pairs

    def add(self, rec: AacRecord) -> None:
        if rec.status == UNIT_UNAVAILABLE:
            self.unit_unavailable += 1
            return
        if rec.status == COUNTEREXAMPLE:
            self.counterexamples += 1
        else:
            self.holds += 1
        if not rec.consistent:
            self.inconsistent += 1
        for c in rec.per_prime:
            self.heuristic_mass += 1.0 / c.p


def csv_rows(rec: AacRecord, full: bool = False) -> list[dict]:
    """Flatten a record to CSV rows, one per odd prime divisor.

    Unit sizes are reported as digit counts; --full adds the integers.
    """
    base = {
        "d": rec.d,
        "delta": rec.delta,
        "t_digits": len(str(abs(rec.unit.t))) if rec.unit else "",
        "u_digits": len(str(abs(rec.unit.u))) if rec.unit else "",
    }
    if full and rec.unit:
        base["t"] = str(rec.unit.t)
        base["u"] = str(rec.unit.u)
    if not rec.per_prime:
        row = dict(base)
        row.update(p="", u_mod_p="", dual="", consistent="", status=rec.status)
        return [row]
    rows = []
    for c in rec.per_prime:
        row = dict(base)
        row.update(
            p=c.p,
            u_mod_p=c.u_mod_p,
            dual=int(c.wieferich_dual),
            consistent=int(c.consistent),
            status=rec.status,
        )
        rows.append(row)
    return rows


@dataclass(frozen=True)
class CongruenceRow:
    n: int
    t_ok: bool
    u_ok: bool


@dataclass(frozen=True)
class CongruenceReport:
    d: int
    p: int
    rows: tuple[CongruenceRow, ...]
    u_p1_matches_u: bool      # u_{p-1} = 0 mod p iff p | u
    u_p1_value_ok: bool       # u_{p-1} = -u/t mod p

    @property
    def all_ok(self) -> bool:
        return (
            all(r.t_ok and r.u_ok for r in self.rows)
            and self.u_p1_matches_u
            and self.u_p1_value_ok
        )


def epsilon_congruences(
    d: int, p: int, n_max: int, cap: int = PQA_DEFAULT_CAP
) -> CongruenceReport:
    """Check t_n = (delta*t/2)^n and u_n = n (delta*t/2)^n u/t mod p.

    eps^n = t_n + u_n sqrt(d) in the half-integer view; 2 is invertible
    mod the odd p | d, so both congruences are exact statements in F_p.
    The n = p-1 row carries the theorem's conclusion.
    """
    if p == 2 or d % p != 0:
        raise ValueError("p must be an odd prime divisor of d")
    F = make_field(d)
    unit = fundamental_unit(F, cap)
    t, u = unit.t, unit.u
    inv2 = pow(2, -1, p)
    c = F.delta * t * inv2 % p
    u_over_t = u * pow(t, -1, p) % p
    rows = []
    power = unit.epsilon
    cpow = c
    u_p1 = None
    for n in range(1, n_max + 1):
        X, Y = power.sqrt_pair()  # eps^n = (X + Y sqrt d) / 2
        t_n = X * inv2 % p
        u_n = Y * inv2 % p
        rows.append(
            CongruenceRow(n, t_n == cpow, u_n == n % p * cpow * u_over_t % p)
        )
        if n == p - 1:
            u_p1 = u_n
        power = power * unit.epsilon
        cpow = cpow * c % p
    if u_p1 is not None:
        matches = (u_p1 == 0) == (u % p == 0)
        value_ok = u_p1 == (-u_over_t) % p
    else:
        # n_max stops short of p-1: conclusion row not reached
        matches = value_ok = True
    return CongruenceReport(d, p, tuple(rows), matches, value_ok)
