"""Pure-Python classification path for the census scan.

This is the reference implementation: it delegates to the exact
residue machinery in quadwief.primes.  The compiled kernel in
quadwief._scan._kernel must reproduce its output tuple-for-tuple on
the ranges it accepts.

Record tuples: (p, conj, kind, norm, cls, f, delta, flags) with kind
and cls as strings (cls None when flagged unsupported), f and delta as
ints or None, and flags a sorted tuple of flag names.  The delta slot
is capped at 3: it is the least of ord_P(x^f - 1) and 3, which is all
the Wieferich classification distinguishes.
"""
from __future__ import annotations

from .. import ratarith
from ..errors import IncompleteFactorization
from ..primes import (
    SplitKind,
    multiplicative_order,
    primes_above,
    residue_pow,
    valuation,
    wieferich_class,
)
from ..quadfield import FieldContext, FieldElement

FLAG_UNSUPPORTED_LEVEL = "UNSUPPORTED_LEVEL"
FLAG_INCOMPLETE_ORDER = "INCOMPLETE_ORDER"
FLAG_BASE_IN_IDEAL = "BASE_IN_IDEAL"


def delta_capped(x: FieldElement, P, f: int) -> int:
    """min(ord_P(x^f - 1), 3) via residue levels, no big powers."""
    if not residue_pow(x, f, P, 2).is_one():
        return 1
    if not residue_pow(x, f, P, 3).is_one():
        return 2
    return 3


def classify_prime(
    F: FieldContext,
    base: FieldElement,
    p: int,
    with_orders: bool = True,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
    norm_limit: int | None = None,
) -> list[tuple]:
    """Classification records for every prime ideal above p."""
    out = []
    for P in primes_above(F, p):
        if norm_limit is not None and P.norm > norm_limit:
            continue
        kind = P.kind.value
        flags = []
        cls = None
        f = delta = None
        hard_two = P.kind is SplitKind.RAMIFIED and p == 2 and F.d % 4 == 3
        if valuation(base, P) > 0:
            # x in P: x^(N-1) = 0 != 1 mod P^2, non-Wieferich by definition
            cls = "NON_WIEFERICH"
            flags.append(FLAG_BASE_IN_IDEAL)
        elif hard_two:
            flags.append(FLAG_UNSUPPORTED_LEVEL)
            if with_orders:
                f = _try_order(base, P, budget, flags)
        else:
            cls = wieferich_class(base, P).value
            if with_orders:
                f = _try_order(base, P, budget, flags)
                if f is not None:
                    delta = delta_capped(base, P, f)
        out.append((p, P.conj_flag, kind, P.norm, cls, f, delta, tuple(sorted(flags))))
    return out


def _try_order(base, P, budget, flags):
    try:
        return multiplicative_order(base, P, budget)
    except IncompleteFactorization:
        flags.append(FLAG_INCOMPLETE_ORDER)
        return None


def classify_primes(
    F: FieldContext,
    base: FieldElement,
    ps: list[int],
    with_orders: bool = True,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
    norm_limit: int | None = None,
) -> list[tuple]:
    out = []
    for p in ps:
        out.extend(classify_prime(F, base, p, with_orders, budget, norm_limit))
    return out
