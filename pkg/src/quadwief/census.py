"""Streaming Wieferich census with checkpointed CSV output.

Enumerates rational primes, expands each to its prime ideals, and
classifies every ideal for a fixed admissible base.  Records carry the
multiplicative order f and the capped exact power delta (values >= 3
report as 3, which is all the classification distinguishes).

Scans shard by rational-prime ranges; workers are stateless and a
single merger emits records ordered by (p, conj), so output is
byte-identical for any job count.  Checkpoints are written atomically
every CHECKPOINT_EVERY primes and on interruption, and a resumed run
reproduces the remaining CSV bytes exactly.
"""
from __future__ import annotations

import csv
import json
import math
import multiprocessing
import os
from dataclasses import dataclass, field
from typing import Iterator

from . import _scan, ratarith
from .cyclotomic import uv_split
from .errors import NonAdmissibleBase
from .heights import abs_height
from .primes import valuation, wieferich_class
from .quadfield import FieldContext, FieldElement, format_element, is_admissible_base, make_field

BOUND_NORM = "norm"
BOUND_PRIME = "prime"

CSV_COLUMNS = ("p", "conj", "kind", "norm", "class", "f_alpha", "delta_alpha", "flags")
CHECKPOINT_VERSION = 1
CHECKPOINT_EVERY = 10_000
_CHUNK = 128

CLASS_NAMES = ("NON_WIEFERICH", "WIEFERICH", "SUPER_WIEFERICH")


@dataclass(frozen=True)
class CensusRecord:
    p: int
    conj: int
    kind: str
    norm: int
    wieferich_class: str | None
    f_alpha: int | None
    delta_alpha: int | None
    flags: tuple[str, ...]

    @staticmethod
    def from_tuple(t: tuple) -> "CensusRecord":
        return CensusRecord(*t)

    def csv_row(self) -> list[str]:
        return [
            str(self.p),
            str(self.conj),
            self.kind,
            str(self.norm),
            self.wieferich_class or "",
            "" if self.f_alpha is None else str(self.f_alpha),
            "" if self.delta_alpha is None else str(self.delta_alpha),
            ";".join(self.flags),
        ]

    @staticmethod
    def from_csv_row(row: list[str]) -> "CensusRecord":
        return CensusRecord(
            int(row[0]),
            int(row[1]),
            row[2],
            int(row[3]),
            row[4] or None,
            int(row[5]) if row[5] else None,
            int(row[6]) if row[6] else None,
            tuple(row[7].split(";")) if row[7] else (),
        )


_worker_state: dict = {}


def _init_worker(d, a, b, with_orders, budget, engine, norm_limit):
    F = make_field(d)
    _worker_state.update(
        F=F,
        base=FieldElement(F, a, b),
        with_orders=with_orders,
        budget=budget,
        engine=engine,
        norm_limit=norm_limit,
    )


def _scan_chunk(ps: list[int]) -> list[tuple]:
    s = _worker_state
    return _classify(
        s["F"], s["base"], ps, s["with_orders"], s["budget"], s["engine"],
        s["norm_limit"],
    )


def _classify(F, base, ps, with_orders, budget, engine, norm_limit) -> list[tuple]:
    return _scan.classify_primes(F, base, ps, with_orders, budget, engine, norm_limit)


def census_scan(
    F: FieldContext,
    base: FieldElement,
    limit: int,
    *,
    bound_kind: str = BOUND_NORM,
    with_orders: bool = True,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
    jobs: int = 1,
    engine: str = _scan.ENGINE_AUTO,
) -> Iterator[CensusRecord]:
    """Ordered stream of census records.

    bound_kind NORM keeps ideals with N(P) <= limit (inert primes only
    while p^2 <= limit); PRIME keeps every ideal above p <= limit.
    """
    if not is_admissible_base(base):
        raise NonAdmissibleBase(f"{base!r} is zero or a root of unity")
    norm_limit = limit if bound_kind == BOUND_NORM else None
    ps = list(ratarith.primes_up_to(limit))
    chunks = [ps[i : i + _CHUNK] for i in range(0, len(ps), _CHUNK)]
    if jobs <= 1:
        for chunk in chunks:
            for t in _classify(F, base, chunk, with_orders, budget, engine, norm_limit):
                yield CensusRecord.from_tuple(t)
        return
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(
        jobs,
        initializer=_init_worker,
        initargs=(F.d, base.a, base.b, with_orders, budget, engine, norm_limit),
    ) as pool:
        for out in pool.imap(_scan_chunk, chunks):
            for t in out:
                yield CensusRecord.from_tuple(t)


# -------------------- counting report --------------------


@dataclass
class CheckpointCounts:
    x: int
    counts: dict
    curve_primary: float    # log x / log log x
    curve_heuristic: float  # log log x


@dataclass
class CountingReport:
    x: int
    s1_count: int
    class_counts: dict
    flagged: int
    checkpoints: list[CheckpointCounts]
    s2_count: int | None = None
    s1_ge_s2: bool | None = None
    s2_lower_bound_ok: bool | None = None
    usable_q_in_range: int | None = None


def _curves(x: int) -> tuple[float, float]:
    if x < 3:
        return 0.0, 0.0
    ll = math.log(math.log(x))
    return (math.log(x) / ll if ll > 0 else 0.0), ll


def counting_report(
    records: list[CensusRecord],
    x: int,
    s2_report: "S2Report | None" = None,
    base_height: float | None = None,
) -> CountingReport:
    """Tabulate S_1(x) and the reference curves at decade checkpoints.

    With an S2 report, also records |S_2(x)| (distinct chosen divisors
    of square-free parts U_q with N(U_q) <= x) and checks the counting
    chain |S_1(x)| >= |S_2(x)| >= #{usable q <= log(x/2)/log h} minus
    the measured number of unusable q below that cutoff.
    """
    marks = []
    c = 1000
    while c <= x:
        marks.append(c)
        c *= 10
    sorted_recs = sorted(records, key=lambda r: (r.norm, r.p, r.conj))
    checkpoints = []
    counts = {k: 0 for k in CLASS_NAMES}
    flagged = 0
    idx = 0
    for m in marks:
        while idx < len(sorted_recs) and sorted_recs[idx].norm <= m:
            r = sorted_recs[idx]
            if r.wieferich_class:
                counts[r.wieferich_class] += 1
            else:
                flagged += 1
            idx += 1
        cp, ch = _curves(m)
        checkpoints.append(CheckpointCounts(m, dict(counts), cp, ch))
    while idx < len(sorted_recs):
        r = sorted_recs[idx]
        if r.wieferich_class:
            counts[r.wieferich_class] += 1
        else:
            flagged += 1
        idx += 1
    report = CountingReport(
        x=x,
        s1_count=counts["NON_WIEFERICH"],
        class_counts=counts,
        flagged=flagged,
        checkpoints=checkpoints,
    )
    if s2_report is not None:
        usable = [
            row for row in s2_report.rows
            if row.status == "OK" and row.u_norm <= x
        ]
        report.s2_count = len({row.chosen for row in usable})
        report.s1_ge_s2 = report.s1_count >= report.s2_count
        if base_height is not None and base_height > 1 and x > 2:
            cutoff = math.log(x / 2) / math.log(base_height)
            in_range = [r for r in s2_report.rows if r.q <= cutoff]
            ok_in_range = sum(
                1 for r in in_range if r.status == "OK" and r.u_norm <= x
            )
            slack = len(in_range) - ok_in_range
            report.usable_q_in_range = ok_in_range
            report.s2_lower_bound_ok = report.s2_count >= ok_in_range - slack
    return report


# -------------------- S2 construction --------------------


@dataclass(frozen=True)
class S2Row:
    q: int
    status: str                      # OK | SKIPPED | NO_FRESH_DIVISOR
    u_norm: int
    chosen: tuple[int, int] | None   # (p, conj)
    non_wieferich: bool | None


@dataclass
class S2Report:
    rows: list[S2Row] = field(default_factory=list)
    distinct_ok: bool = True
    avoid_a1_ok: bool = True
    in_s1_ok: bool = True
    first_usable_q: int | None = None  # empirical threshold M
    skipped: int = 0


def s2_construction(
    F: FieldContext,
    base: FieldElement,
    q_max: int,
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
) -> S2Report:
    """Constructive lower-bound set: a fresh non-Wieferich divisor of the
    square-free part U_q for each rational prime q.

    For each q with a complete factorization the chosen divisor is the
    least prime of U_q avoiding (base - 1); the report tracks pairwise
    distinctness across q (the gcd lemma in action), avoidance of A_1,
    and the non-Wieferich classification of every chosen prime.
    """
    report = S2Report()
    n1 = (base - 1).abs_norm() if (base - 1) else 0
    seen: set[tuple[int, int]] = set()
    for q in ratarith.primes_up_to(q_max):
        split = uv_split(base, q, budget)
        if not split.complete:
            report.rows.append(S2Row(q, "SKIPPED", 0, None, None))
            report.skipped += 1
            continue
        nu = split.U.norm()
        chosen = None
        for P, _ in split.U.items:
            if valuation(base - 1, P) == 0:
                chosen = P
                break
        if chosen is None:
            if nu > n1:
                # contract violation: a fresh divisor must exist
                report.avoid_a1_ok = False
            report.rows.append(S2Row(q, "NO_FRESH_DIVISOR", nu, None, None))
            continue
        key = (chosen.p, chosen.conj_flag)
        if key in seen:
            report.distinct_ok = False
        seen.add(key)
        nw = wieferich_class(base, chosen).value == "NON_WIEFERICH"
        if not nw:
            report.in_s1_ok = False
        if report.first_usable_q is None:
            report.first_usable_q = q
        report.rows.append(S2Row(q, "OK", nu, key, nw))
    return report


# -------------------- checkpointed CSV runner --------------------


class CensusRunner:
    """File-based census with atomic checkpoints and resume."""

    def __init__(
        self,
        F: FieldContext,
        base: FieldElement,
        limit: int,
        csv_path: str,
        checkpoint_path: str,
        *,
        bound_kind: str = BOUND_NORM,
        with_orders: bool = True,
        budget: int = ratarith.DEFAULT_FACTOR_BUDGET,
        jobs: int = 1,
        engine: str = _scan.ENGINE_AUTO,
        checkpoint_every: int = CHECKPOINT_EVERY,
        stop_after_primes: int | None = None,
    ):
        self.F = F
        self.base = base
        self.limit = limit
        self.csv_path = csv_path
        self.checkpoint_path = checkpoint_path
        self.bound_kind = bound_kind
        self.with_orders = with_orders
        self.budget = budget
        self.jobs = jobs
        self.engine = engine
        self.checkpoint_every = checkpoint_every
        self.stop_after_primes = stop_after_primes
        self.counts = {k: 0 for k in CLASS_NAMES}
        self.counts["flagged"] = 0
        self.counts["records"] = 0

    def _write_checkpoint(self, last_p: int) -> None:
        state = {
            "field": self.F.d,
            "base": format_element(self.base),
            "last_p": last_p,
            "counts": self.counts,
            "version": CHECKPOINT_VERSION,
        }
        tmp = self.checkpoint_path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(state, fh, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, self.checkpoint_path)

    def _load_checkpoint(self) -> int:
        with open(self.checkpoint_path) as fh:
            state = json.load(fh)
        if state.get("version") != CHECKPOINT_VERSION:
            raise ValueError("unknown checkpoint version")
        if state["field"] != self.F.d or state["base"] != format_element(self.base):
            raise ValueError("checkpoint belongs to a different field or base")
        self.counts = state["counts"]
        return state["last_p"]

    def _truncate_csv(self, last_p: int) -> None:
        """Drop rows beyond the checkpoint (torn writes from a kill)."""
        if not os.path.exists(self.csv_path):
            with open(self.csv_path, "w", newline="") as fh:
                csv.writer(fh, lineterminator="\n").writerow(CSV_COLUMNS)
            return
        with open(self.csv_path, newline="") as fh:
            rows = list(csv.reader(fh))
        keep = [rows[0]] + [r for r in rows[1:] if r and int(r[0]) <= last_p]
        tmp = self.csv_path + ".tmp"
        with open(tmp, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(keep)
        os.replace(tmp, self.csv_path)

    def _count(self, rec: CensusRecord) -> None:
        if rec.wieferich_class:
            self.counts[rec.wieferich_class] += 1
        else:
            self.counts["flagged"] += 1
        self.counts["records"] += 1

    def run(self, resume: bool = False) -> str:
        """Returns "complete" or "interrupted" (resumable state on disk)."""
        norm_limit = self.limit if self.bound_kind == BOUND_NORM else None
        ps = list(ratarith.primes_up_to(self.limit))
        start = 0
        if resume:
            last_p = self._load_checkpoint()
            self._truncate_csv(last_p)
            while start < len(ps) and ps[start] <= last_p:
                start += 1
        else:
            with open(self.csv_path, "w", newline="") as fh:
                csv.writer(fh, lineterminator="\n").writerow(CSV_COLUMNS)
        todo = ps[start:]
        chunks = [todo[i : i + _CHUNK] for i in range(0, len(todo), _CHUNK)]
        processed = 0
        since_checkpoint = 0
        last_done = ps[start - 1] if start else 0
        pool = None
        if self.jobs > 1:
            ctx = multiprocessing.get_context("fork")
            pool = ctx.Pool(
                self.jobs,
                initializer=_init_worker,
                initargs=(
                    self.F.d, self.base.a, self.base.b, self.with_orders,
                    self.budget, self.engine, norm_limit,
                ),
            )
        try:
            if pool is not None:
                stream = pool.imap(_scan_chunk, chunks)
            else:
                stream = (
                    _classify(
                        self.F, self.base, chunk, self.with_orders,
                        self.budget, self.engine, norm_limit,
                    )
                    for chunk in chunks
                )
            with open(self.csv_path, "a", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                for chunk, out in zip(chunks, stream):
                    for t in out:
                        rec = CensusRecord.from_tuple(t)
                        writer.writerow(rec.csv_row())
                        self._count(rec)
                    last_done = chunk[-1]
                    processed += len(chunk)
                    since_checkpoint += len(chunk)
                    if since_checkpoint >= self.checkpoint_every:
                        fh.flush()
                        self._write_checkpoint(last_done)
                        since_checkpoint = 0
                    if (
                        self.stop_after_primes is not None
                        and processed >= self.stop_after_primes
                        and chunk is not chunks[-1]
                    ):
                        fh.flush()
                        self._write_checkpoint(last_done)
                        return "interrupted"
        except KeyboardInterrupt:
            self._write_checkpoint(last_done)
            return "interrupted"
        finally:
            if pool is not None:
                pool.terminate()
                pool.join()
        self._write_checkpoint(last_done)
        return "complete"

    def records(self) -> list[CensusRecord]:
        with open(self.csv_path, newline="") as fh:
            rows = list(csv.reader(fh))
        return [CensusRecord.from_csv_row(r) for r in rows[1:]]

    def report(self, s2_report: S2Report | None = None) -> CountingReport:
        try:
            h = float(abs_height(self.base).value)
        except Exception:
            h = None
        return counting_report(self.records(), self.limit, s2_report, h)
