"""Rational-integer utilities.

Kronecker symbols, probable-prime testing, budgeted factorization
(trial division + Pollard rho with Brent cycle detection), Hensel
lifting of square roots modulo odd prime powers, and prime sieving.

Everything here is deterministic: the rho parameter sweep and the
probable-prime bases for very large inputs are derived from a fixed
seed so repeated runs factor the same input identically.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd, isqrt

from .errors import NonResidue

# Trial-division bound; primes below it are sieved once and cached.
TRIAL_BOUND = 10_000

# Default Pollard-rho iteration budget and the recorded seed that makes
# runs reproducible (drives rho's polynomial increments and the random
# Miller-Rabin bases used above the deterministic-base range).
DEFAULT_FACTOR_BUDGET = 3_000_000
RHO_SEED = 0x5EED_1093_3511

# Deterministic Miller-Rabin base set, valid for all n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

_small_primes_cache: list[int] = []


def small_primes() -> list[int]:
    """Primes below TRIAL_BOUND, sieved once and cached."""
    if not _small_primes_cache:
        sieve = bytearray([1]) * TRIAL_BOUND
        sieve[0:2] = b"\x00\x00"
        for i in range(2, isqrt(TRIAL_BOUND) + 1):
            if sieve[i]:
                sieve[i * i :: i] = b"\x00" * len(range(i * i, TRIAL_BOUND, i))
        _small_primes_cache.extend(i for i in range(TRIAL_BOUND) if sieve[i])
    return _small_primes_cache


def primes_up_to(limit: int):
    """Yield rational primes <= limit in ascending order (segmented sieve)."""
    if limit < 2:
        return
    base = small_primes()
    for p in base:
        if p > limit:
            return
        yield p
    lo = TRIAL_BOUND
    seg = 1 << 17
    while lo <= limit:
        hi = min(lo + seg, limit + 1)
        mark = bytearray([1]) * (hi - lo)
        for p in base:
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            mark[start - lo :: p] = b"\x00" * len(range(start, hi, p))
        for i, ok in enumerate(mark):
            if ok:
                yield lo + i
        lo = hi


def is_probable_prime(n: int) -> bool:
    """Strong probable-prime test.

    Uses the 12-base deterministic Miller-Rabin set (exact below
    3.317e24) and falls back to 64 seed-derived random bases above.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_LIMIT:
        bases = _MR_BASES
    else:
        rng = random.Random(RHO_SEED ^ n)
        bases = tuple(rng.randrange(2, n - 1) for _ in range(64))
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), total for n != 0.

    Multiplicative in both arguments; extends the Jacobi symbol by
    (a/2) = 0, 1, -1 for a even, a = +-1 mod 8, a = +-3 mod 8 and by
    (a/-1) = sign(a) with (0/-1) = 1.
    """
    if n == 0:
        raise ValueError("kronecker undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # strip factors of 2 from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    # now n is odd and positive: Jacobi loop with reciprocity
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 2:
        return n
    x = 1 << (-(-n.bit_length() // k))
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _brent_rho(n: int, budget: int) -> tuple[int | None, int]:
    """One factor of odd composite n via Brent's cycle detection.

    Sweeps the polynomial x^2 + c for c = 1, 2, ... deterministically.
    Returns (factor, iterations_used); factor is None on budget
    exhaustion.
    """
    used = 0
    c = 1
    while used < budget:
        y, r, q = 2, 1, 1
        g = 1
        x = y
        ys = y
        while g == 1 and used < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            used += r
            k = 0
            while k < r and g == 1:
                ys = y
                lim = min(128, r - k)
                for _ in range(lim):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                used += lim
                g = gcd(q, n)
                k += lim
            r <<= 1
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
                used += 1
        if 1 < g < n:
            return g, used
        c += 1
    return None, used


@dataclass(frozen=True)
class FactorMap:
    """Multiset of prime factors with an unfactored cofactor.

    Invariant: prod(p**e) * cofactor == the factored input, every key
    passes is_probable_prime, and complete is True iff cofactor == 1.
    """

    factors: dict[int, int] = field(default_factory=dict)
    cofactor: int = 1
    complete: bool = True

    def reconstruct(self) -> int:
        out = self.cofactor
        for p, e in self.factors.items():
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return sorted(self.factors)

    def merge(self, other: "FactorMap") -> "FactorMap":
        """Factorization of the product of the two factored inputs."""
        fac = dict(self.factors)
        for p, e in other.factors.items():
            fac[p] = fac.get(p, 0) + e
        return FactorMap(fac, self.cofactor * other.cofactor,
                         self.complete and other.complete)


def factor_integer(n: int, budget: int = DEFAULT_FACTOR_BUDGET) -> FactorMap:
    """Factor n >= 1: trial division below TRIAL_BOUND, then Pollard rho.

    Deterministic for a fixed budget. On budget exhaustion the composite
    remnant is reported as the cofactor and complete is False.
    """
    if n < 1:
        raise ValueError("factor_integer requires n >= 1")
    fac: dict[int, int] = {}
    for p in small_primes():
        if p * p > n:
            break
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    if n == 1:
        return FactorMap(fac, 1, True)
    used = 0
    stack = [n]
    cofactor = 1
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        # rho cannot split perfect powers of a prime efficiently; peel them
        racine = None
        for k in range(2, m.bit_length() + 1):
            r = _iroot(m, k)
            if r > 1 and r**k == m:
                racine = (r, k)
                break
        if racine is not None:
            r, k = racine
            stack.extend([r] * k)
            continue
        g, it = _brent_rho(m, budget - used)
        used += it
        if g is None:
            cofactor *= m
            continue
        stack.append(g)
        stack.append(m // g)
    return FactorMap(fac, cofactor, cofactor == 1)


def tonelli_sqrt(d: int, p: int) -> int:
    """One square root of d modulo an odd prime p with (d/p) = +1."""
    d %= p
    if p % 4 == 3:
        return pow(d, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(d, q, p), pow(d, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 1, t * t % p
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


def hensel_sqrt(d: int, p: int, k: int) -> int:
    """Canonical square root of d modulo p^k for an odd prime p.

    The level-1 root is the smaller of the two representatives mod p;
    higher levels are its unique Hensel lift, so the level-k value
    always reduces to the level-(k-1) value mod p^(k-1).
    """
    if kronecker(d, p) != 1:
        raise NonResidue(f"{d} is not a quadratic residue modulo {p}")
    r = tonelli_sqrt(d, p)
    r = min(r, p - r)
    mod = p
    # Newton lift, doubling precision: r <- r - (r^2 - d) / (2r)
    while mod < p**k:
        mod = min(mod * mod, p**k)
        r = (r - (r * r - d) * pow(2 * r, -1, mod)) % mod
    return r % p**k


def v_p(n: int, p: int) -> int:
    """Exponent of p in n; n must be nonzero."""
    if n == 0:
        raise ValueError("v_p(0) is infinite")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v
