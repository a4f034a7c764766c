"""Census classification engine selection.

The compiled kernel is used when it imported successfully and the
inputs fit its integer ranges; otherwise (and always for p = 2) the
pure-Python reference path runs.  Both produce identical record tuples.
Set QUADWIEF_PURE=1 to force the fallback.
"""
from __future__ import annotations

import os

from .. import ratarith
from ..quadfield import FieldContext, FieldElement
from . import pure

try:
    from . import _kernel
except ImportError:  # pragma: no cover - depends on build environment
    _kernel = None

HAVE_KERNEL = _kernel is not None

ENGINE_AUTO = "auto"
ENGINE_PURE = "pure"
ENGINE_KERNEL = "kernel"


def kernel_applicable(F: FieldContext, base: FieldElement, p: int) -> bool:
    if _kernel is None or os.environ.get("QUADWIEF_PURE"):
        return False
    if p == 2 or p > _kernel.PMAX:
        return False
    bound = _kernel.COORD_MAX
    return abs(F.d) < bound and abs(base.a) < bound and abs(base.b) < bound


def classify_primes(
    F: FieldContext,
    base: FieldElement,
    ps: list[int],
    with_orders: bool = True,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
    engine: str = ENGINE_AUTO,
    norm_limit: int | None = None,
) -> list[tuple]:
    """Classification tuples for all ideals above the primes in ps."""
    if engine == ENGINE_PURE:
        return pure.classify_primes(F, base, ps, with_orders, budget, norm_limit)
    if engine == ENGINE_KERNEL and _kernel is None:
        raise RuntimeError("compiled kernel unavailable; rebuild or use pure")
    fast = [p for p in ps if kernel_applicable(F, base, p)]
    if engine == ENGINE_KERNEL and len(fast) != len(ps):
        raise RuntimeError("kernel cannot handle these inputs; use engine=auto")
    if not fast:
        return pure.classify_primes(F, base, ps, with_orders, budget, norm_limit)
    fast_set = set(fast)
    results: dict[int, list[tuple]] = {}
    for p in fast:
        results[p] = []
    kernel_out = _kernel.classify_batch(
        F.d, F.delta, base.a, base.b, fast, with_orders, norm_limit
    )
    for rec in kernel_out:
        results[rec[0]].append(rec)
    for p in ps:
        if p not in fast_set:
            results[p] = pure.classify_prime(
                F, base, p, with_orders, budget, norm_limit
            )
    out = []
    for p in ps:
        out.extend(results[p])
    return out
