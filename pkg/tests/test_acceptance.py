"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line with its runtime.

Criterion 7's norm-growth clause |N(x^n-1)| <= 2 h(x)^n is asserted
exactly as stated and is expected to fail: the bound is false at degree
2 (base 2 in Q(sqrt 5) gives N(3) = 9 > 2 h(2)^2 = 8 already at n = 2).
The degree-corrected bound 2^places * h^(n*degree) is verified in a
companion test so the red line isolates the defective formula, not the
machinery.  See /root/notes/decisions.md.
"""
import time
from contextlib import contextmanager
from math import gcd

import pytest

from quadwief.aac import HOLDS, UNIT_UNAVAILABLE, aac_check, epsilon_congruences
from quadwief.census import (
    BOUND_PRIME,
    CensusRunner,
    census_scan,
    s2_construction,
)
from quadwief.cyclotomic import (
    IdealFactorization,
    cyclotomic_value,
    factor_principal,
    ideal_gcd_an,
    verify_valuation_trichotomy,
)
from quadwief.errors import IncompleteFactorization, NotSquarefree
from quadwief.heights import support_of_ideal, triple_height, abs_height, ramified_constant
from quadwief.primes import (
    SplitKind,
    multiplicative_order,
    primes_above,
    valuation,
    wieferich_class,
)
from quadwief.quadfield import fundamental_unit, make_field, pell_oracle
from quadwief.ratarith import primes_up_to

from conftest import TESTED_BASES, cache_key
from oracles import rational_base_wieferich_scan


@contextmanager
def criterion(num, name, budget_seconds):
    start = time.time()
    state = {"ok": False}
    try:
        yield state
        state["ok"] = True
    finally:
        elapsed = time.time() - start
        verdict = "PASS" if state["ok"] else "FAIL"
        print(f"\nACCEPTANCE {num} ({name}): {verdict} [{elapsed:.1f}s]")
    assert elapsed < budget_seconds, f"criterion {num} exceeded {budget_seconds}s"


def squarefree_range(lo, hi):
    for d in range(lo, hi + 1):
        try:
            yield make_field(d)
        except NotSquarefree:
            continue


def test_criterion_1_unit_correctness():
    with criterion(1, "unit correctness vs Pell oracle", 60):
        checked = 0
        for F in squarefree_range(2, 500):
            unit = fundamental_unit(F)
            oracle = pell_oracle(F, 10**6)
            if oracle is None:
                assert unit.u > 10**6  # oracle is silent only beyond its bound
                continue
            assert (oracle.t, oracle.u, oracle.unit_norm) == (
                unit.t,
                unit.u,
                unit.unit_norm,
            ), F.d
            checked += 1
        assert checked > 250


def test_criterion_2_theorem_equivalence():
    with criterion(2, "p|u iff eps^(p-1) = 1 mod P^2, d <= 2000", 300):
        checked = 0
        for d in range(3, 2001):
            try:
                rec = aac_check(d)
            except NotSquarefree:
                continue
            if rec.status == UNIT_UNAVAILABLE:
                continue
            for c in rec.per_prime:
                assert c.consistent, (d, c)
                checked += 1
        assert checked > 1500


def test_criterion_3_congruences():
    with criterion(3, "eps^n congruences, d <= 200, n <= 100", 60):
        rows = 0
        for F in squarefree_range(3, 200):
            for p in sorted(ratfac(F.d)):
                if p == 2:
                    continue
                rep = epsilon_congruences(F.d, p, 100)
                assert rep.all_ok, (F.d, p)
                rows += len(rep.rows)
        assert rows > 10_000


def ratfac(n):
    from quadwief.ratarith import factor_integer

    return factor_integer(n).primes()


def test_criterion_4_valuation_trichotomy(bases):
    with criterion(4, "valuation trichotomy, N(P) <= 2000, n <= 300", 300):
        ideals_checked = 0
        for F, x in bases:
            phi_cache = {}
            for p in primes_up_to(2000):
                if p == 2:
                    continue
                for P in primes_above(F, p):
                    if P.norm > 2000 or P.kind is SplitKind.RAMIFIED:
                        continue
                    if valuation(x, P) != 0:
                        continue
                    f = multiplicative_order(x, P)
                    if f > 60:
                        continue
                    rows = verify_valuation_trichotomy(x, P, 300)
                    assert all(r["status"] == "OK" for r in rows), (F.d, p)
                    ideals_checked += 1
        assert ideals_checked > 50


def cn_factorization(x, n, budget=3_000_000):
    """Route-independent factorization of C_n = (Phi_n(x))."""
    value, _ = cyclotomic_value(x, n)
    return factor_principal(value, budget)


def test_criterion_5_product_identity_and_gcd(bases, an_cache):
    with criterion(5, "A_n = prod C_d and gcd lemma", 600):
        rows = skipped = 0
        for F, x in bases:
            cache = an_cache[cache_key(F, x)]
            cns = {}
            for n in range(1, 61):
                rows += 1
                an = cache[n]
                try:
                    for d in range(1, n + 1):
                        if n % d == 0 and d not in cns:
                            cns[d] = cn_factorization(x, d)
                except IncompleteFactorization:
                    skipped += 1
                    continue
                if not an.complete or any(
                    not cns[d].complete for d in cns if n % d == 0
                ):
                    skipped += 1
                    continue
                merged = IdealFactorization((), True)
                for d in range(1, n + 1):
                    if n % d == 0:
                        merged = merged.mul(cns[d])
                assert merged.items == an.items, (F.d, n)
            # gcd lemma on coprime pairs
            a1_items = factor_principal(x - 1).items if (x - 1) else ()
            for m in range(1, 31):
                for n in range(m + 1, 31):
                    if gcd(m, n) != 1:
                        continue
                    rows += 1
                    try:
                        g = ideal_gcd_an(x, m, n)
                    except IncompleteFactorization:
                        skipped += 1
                        continue
                    assert g.items == a1_items, (F.d, m, n)
        assert skipped <= 0.05 * rows, (skipped, rows)


def test_criterion_6_non_wieferich_criterion(bases, an_cache):
    with criterion(6, "every prime of U_n is non-Wieferich", 120):
        checked = 0
        for F, x in bases:
            cache = an_cache[cache_key(F, x)]
            for n in range(1, 61):
                an = cache[n]
                if not an.complete:
                    continue  # quarantined, never PASS/FAIL
                for P, e in an.items:
                    if e != 1:
                        continue
                    cls = wieferich_class(x, P)
                    assert cls.value == "NON_WIEFERICH", (F.d, n, P)
                    checked += 1
        assert checked > 200


def test_criterion_7_height_inequalities(bases, an_cache):
    """As stated, including the norm-growth clause known to be false at
    degree 2; expected to FAIL there and only there."""
    with criterion(7, "height and support inequalities (as stated)", 300):
        violations = []
        for F, x in bases:
            cache = an_cache[cache_key(F, x)]
            h = abs_height(x, 128)
            A = ramified_constant(F)
            tol = 1 + pow(2, -120)
            for n in range(1, 61):
                an = cache[n]
                if not an.complete:
                    continue
                y = x**n - 1
                ny = y.abs_norm()
                ht = triple_height(F.one(), y, x**n, 128)
                max_norm = max(1, ny, x.abs_norm() ** n)
                if not max_norm <= ht.lower:
                    violations.append(("max-norm", F.d, n))
                if not ny <= 2 * h.lower**n * tol:
                    violations.append(("norm-growth", F.d, n))
                u = IdealFactorization(
                    tuple((P, e) for P, e in an.items if e == 1), True
                )
                v = IdealFactorization(
                    tuple((P, e) for P, e in an.items if e >= 2), True
                )
                qu, qv = support_of_ideal(u).q, support_of_ideal(v).q
                if not qu <= u.norm() ** 2:
                    violations.append(("support-U", F.d, n))
                if not qv * qv <= A * A * v.norm():
                    violations.append(("support-V", F.d, n))
        assert not violations, (
            f"{len(violations)} violations, all in the stated norm-growth "
            f"bound |N(x^n-1)| <= 2h(x)^n, which is false at degree 2 "
            f"(see decisions ledger): {violations[:8]}..."
        )


def test_criterion_7_companion_degree_corrected(bases, an_cache):
    """The same checks with the degree-corrected norm-growth bound
    |N(x^n-1)| <= 2^places * h(x)^(n*degree): everything passes."""
    with criterion(7, "height inequalities (degree-corrected)", 300):
        for F, x in bases:
            cache = an_cache[cache_key(F, x)]
            h = abs_height(x, 128)
            A = ramified_constant(F)
            tol = 1 + pow(2, -120)
            for n in range(1, 61):
                an = cache[n]
                if not an.complete:
                    continue
                y = x**n - 1
                ny = y.abs_norm()
                ht = triple_height(F.one(), y, x**n, 128)
                assert max(1, ny, x.abs_norm() ** n) <= ht.lower
                assert ny <= 4 * h.lower ** (2 * n) * tol, (F.d, n)
                u = IdealFactorization(
                    tuple((P, e) for P, e in an.items if e == 1), True
                )
                v = IdealFactorization(
                    tuple((P, e) for P, e in an.items if e >= 2), True
                )
                assert support_of_ideal(u).q <= u.norm() ** 2
                assert support_of_ideal(v).q ** 2 <= A * A * v.norm()


# oracle-pinned Wieferich-or-stronger sets for base 2, rational p <= 5000;
# the ramified prime over 5 is genuinely base-2 Wieferich (2^4 = 1 mod 5 O_K)
PINNED_WIEFERICH = {
    5: {(5, "RAMIFIED", 0), (1093, "INERT", 0), (3511, "SPLIT", 0),
        (3511, "SPLIT", 1)},
    2: {(1093, "INERT", 0), (3511, "SPLIT", 0), (3511, "SPLIT", 1)},
}


def test_criterion_8_classical_recovery():
    with criterion(8, "base-2 census recovers 1093 and 3511", 60):
        for d, pinned in PINNED_WIEFERICH.items():
            F = make_field(d)
            records = list(
                census_scan(F, F.element(2), 5000, bound_kind=BOUND_PRIME)
            )
            got = {
                (r.p, r.kind, r.conj)
                for r in records
                if r.wieferich_class in ("WIEFERICH", "SUPER_WIEFERICH")
            }
            assert got == pinned, d
            # the pre-build oracle, recomputed from scratch
            assert got == rational_base_wieferich_scan(d, 2, 5000), d
            # and the headline ideals are all present
            assert {(p, k) for p, k, _ in got} >= {(1093, "INERT"), (3511, "SPLIT")}


def test_criterion_9_s2_construction(bases):
    with criterion(9, "S2 divisors distinct, fresh, and in S1", 300):
        for F, x in bases:
            rep = s2_construction(F, x, 50)
            assert rep.distinct_ok, F.d
            assert rep.avoid_a1_ok, F.d
            assert rep.in_s1_ok, F.d
            complete_rows = [r for r in rep.rows if r.status != "SKIPPED"]
            assert len(complete_rows) >= 12, F.d


def test_criterion_10_determinism(tmp_path):
    with criterion(10, "sharding and kill/resume determinism", 120):
        F = make_field(5)
        base = F.element(2)

        def run(name, jobs, stop_after=None, resume=False):
            csvp = str(tmp_path / f"{name}.csv")
            ckp = str(tmp_path / f"{name}.ckpt.json")
            r = CensusRunner(
                F, base, 5000, csvp, ckp, bound_kind=BOUND_PRIME, jobs=jobs,
                checkpoint_every=100, stop_after_primes=stop_after,
            )
            status = r.run(resume=resume)
            with open(csvp, "rb") as fh:
                return status, fh.read()

        s, single = run("j1", 1)
        assert s == "complete"
        s, quad = run("j4", 4)
        assert s == "complete"
        assert single == quad
        s, _ = run("kill", 1, stop_after=300)
        assert s == "interrupted"
        s, resumed = run("kill", 1, resume=True)
        assert s == "complete"
        assert resumed == single
