"""Command-line frontend.

Every pipeline is exposed as a subcommand with file-based outputs:
JSON for single objects, CSV or JSON-lines for streams.  Options merge
as flags > environment (QUADWIEF_<SECTION>_<KEY>) > --config file >
defaults, and arbitrary-precision integers are serialized as decimal
strings.  Domain errors exit 1 with a JSON error object on stderr;
usage errors exit 2; an interrupted (resumable) census exits 3.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, fields, replace

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

import mpmath

from . import aac, census, heights, ratarith
from .census import CensusRunner
from .cyclotomic import verify_ramified_inequality, verify_valuation_trichotomy
from .errors import IncompleteFactorization, QuadwiefError
from .primes import SplitKind, multiplicative_order, primes_above, valuation
from .quadfield import fundamental_unit, make_field, parse_element

ENV_PREFIX = "QUADWIEF"

_SECTIONS = {
    "d": ("field", "d"),
    "base": ("base", "literal"),
    "limit": ("scan", "limit"),
    "bound": ("scan", "bound"),
    "n_max": ("scan", "n_max"),
    "q_max": ("scan", "q_max"),
    "f_max": ("scan", "f_max"),
    "norm_limit": ("scan", "norm_limit"),
    "d_min": ("scan", "d_min"),
    "d_max": ("scan", "d_max"),
    "mode": ("scan", "mode"),
    "jobs": ("scan", "jobs"),
    "budget": ("scan", "budget"),
    "cap": ("scan", "cap"),
    "precision": ("scan", "precision"),
    "seed": ("scan", "seed"),
    "strictness": ("scan", "strictness"),
    "with_orders": ("scan", "with_orders"),
    "engine": ("scan", "engine"),
    "n": ("scan", "n"),
    "out": ("output", "out"),
    "checkpoint": ("output", "checkpoint"),
    "full": ("output", "full"),
    "resume": ("output", "resume"),
    "stop_after": ("output", "stop_after"),
}


@dataclass
class RunConfig:
    """Merged run options; round-trips losslessly through TOML."""

    d: int | None = None
    base: str | None = None
    limit: int = 10_000
    bound: str = census.BOUND_PRIME
    n_max: int = 60
    q_max: int = 50
    f_max: int = 60
    norm_limit: int = 2000
    d_min: int = 3
    d_max: int = 100
    mode: str = aac.ALL_SQUAREFREE
    jobs: int = 1
    budget: int = ratarith.DEFAULT_FACTOR_BUDGET
    cap: int = 10_000_000
    precision: int = heights.DEFAULT_PRECISION
    seed: int = ratarith.RHO_SEED
    strictness: str = heights.NOT_ALL_EQUAL
    with_orders: bool = True
    engine: str = "auto"
    n: int = 1
    out: str | None = None
    checkpoint: str | None = None
    full: bool = False
    resume: bool = False
    stop_after: int | None = None

    def to_toml(self) -> str:
        sections: dict[str, list[str]] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            section, key = _SECTIONS[f.name]
            if isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, int):
                text = str(value)
            else:
                text = json.dumps(value)
            sections.setdefault(section, []).append(f"{key} = {text}")
        out = []
        for section in ("field", "base", "scan", "output"):
            if section in sections:
                out.append(f"[{section}]")
                out.extend(sections[section])
                out.append("")
        return "\n".join(out)

    @classmethod
    def from_toml(cls, text: str) -> "RunConfig":
        data = tomllib.loads(text)
        cfg = cls()
        return cfg.merged_with_sections(data)

    def merged_with_sections(self, data: dict) -> "RunConfig":
        updates = {}
        for f in fields(self):
            section, key = _SECTIONS[f.name]
            if section in data and key in data[section]:
                updates[f.name] = data[section][key]
        return replace(self, **updates)

    def merged_with_env(self, environ=os.environ) -> "RunConfig":
        updates = {}
        for f in fields(self):
            section, key = _SECTIONS[f.name]
            name = f"{ENV_PREFIX}_{section.upper()}_{key.upper()}"
            if name not in environ:
                continue
            raw = environ[name]
            current = getattr(self, f.name)
            if isinstance(current, bool) or f.name in ("with_orders", "full", "resume"):
                updates[f.name] = raw.lower() in ("1", "true", "yes", "on")
            elif f.name in ("base", "mode", "bound", "strictness", "engine",
                            "out", "checkpoint"):
                updates[f.name] = raw
            else:
                updates[f.name] = int(raw)
        return replace(self, **updates)

    def merged_with_args(self, args: argparse.Namespace) -> "RunConfig":
        updates = {}
        for f in fields(self):
            value = getattr(args, f.name, None)
            if value is not None:
                updates[f.name] = value
        return replace(self, **updates)


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        with open(args.config, "rb") as fh:
            cfg = cfg.merged_with_sections(tomllib.load(fh))
    cfg = cfg.merged_with_env()
    cfg = cfg.merged_with_args(args)
    ratarith.RHO_SEED = cfg.seed
    return cfg


def _require(cfg: RunConfig, parser, *names):
    for name in names:
        if getattr(cfg, name) is None:
            parser.error(f"missing required option --{name.replace('_', '-')}")


def _field_and_base(cfg: RunConfig):
    F = make_field(cfg.d)
    base = parse_element(cfg.base, F)
    return F, base


def _json_out(obj) -> int:
    json.dump(obj, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _decimal(fraction, precision: int) -> str:
    old = mpmath.mp.prec
    try:
        mpmath.mp.prec = precision
        v = mpmath.mpf(fraction.numerator) / mpmath.mpf(fraction.denominator)
        return mpmath.nstr(v, max(6, precision // 4), strip_zeros=False)
    finally:
        mpmath.mp.prec = old


# -------------------- subcommands --------------------


def cmd_unit(cfg: RunConfig, parser) -> int:
    _require(cfg, parser, "d")
    F = make_field(cfg.d)
    unit = fundamental_unit(F, cfg.cap)
    return _json_out({"t": str(unit.t), "u": str(unit.u), "norm": unit.unit_norm})


def cmd_aac_check(cfg: RunConfig, parser) -> int:
    _require(cfg, parser, "d")
    rec = aac.aac_check(cfg.d, cfg.cap)
    obj = {
        "d": rec.d,
        "delta": rec.delta,
        "status": rec.status,
        "consistent": rec.consistent,
        "per_prime": [
            {
                "p": c.p,
                "u_mod_p": c.u_mod_p,
                "dual": c.wieferich_dual,
                "consistent": c.consistent,
            }
            for c in rec.per_prime
        ],
    }
    if rec.unit:
        obj["t_digits"] = len(str(abs(rec.unit.t)))
        obj["u_digits"] = len(str(abs(rec.unit.u)))
        if cfg.full:
            obj["t"] = str(rec.unit.t)
            obj["u"] = str(rec.unit.u)
    return _json_out(obj)


_AAC_COLUMNS = ("d", "delta", "t_digits", "u_digits", "p", "u_mod_p",
                "dual", "consistent", "status")


def cmd_aac_scan(cfg: RunConfig, parser) -> int:
    _require(cfg, parser, "out")
    summary = aac.AacSummary()
    columns = _AAC_COLUMNS + (("t", "u") if cfg.full else ())
    with open(cfg.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, columns, lineterminator="\n")
        writer.writeheader()
        for rec in aac.aac_scan(cfg.d_min, cfg.d_max, cfg.mode, cfg.cap):
            summary.add(rec)
            for row in aac.csv_rows(rec, cfg.full):
                writer.writerow(row)
    return _json_out(
        {
            "holds": summary.holds,
            "counterexamples": summary.counterexamples,
            "unit_unavailable": summary.unit_unavailable,
            "inconsistent": summary.inconsistent,
            "heuristic_mass": summary.heuristic_mass,
        }
    )


def cmd_wieferich_scan(cfg: RunConfig, parser) -> int:
    _require(cfg, parser, "d", "base", "out")
    F, base = _field_and_base(cfg)
    checkpoint = cfg.checkpoint or cfg.out + ".ckpt.json"
    runner = CensusRunner(
        F,
        base,
        cfg.limit,
        cfg.out,
        checkpoint,
        bound_kind=cfg.bound,
        with_orders=cfg.with_orders,
        budget=cfg.budget,
        jobs=cfg.jobs,
        engine=cfg.engine,
        stop_after_primes=cfg.stop_after,
    )
    status = runner.run(resume=cfg.resume)
    if status == "interrupted":
        _json_out({"status": status, "counts": runner.counts})
        return 3
    report = runner.report()
    _json_out(
        {
            "status": status,
            "counts": runner.counts,
            "s1_count": report.s1_count,
            "checkpoints": [
                {
                    "x": c.x,
                    "counts": c.counts,
                    "log_x_over_loglog_x": c.curve_primary,
                    "loglog_x": c.curve_heuristic,
                }
                for c in report.checkpoints
            ],
        }
    )
    return 0


def cmd_cyclo_verify(cfg: RunConfig, parser) -> int:
    _require(cfg, parser, "d", "base", "out")
    F, base = _field_and_base(cfg)
    checked = violations = written = 0
    with open(cfg.out, "w") as fh:
        for p in ratarith.primes_up_to(cfg.norm_limit):
            for P in primes_above(F, p):
                if P.norm > cfg.norm_limit or P.p == 2:
                    continue
                if valuation(base, P) != 0:
                    continue
                if P.kind is SplitKind.RAMIFIED:
                    rows = verify_ramified_inequality(base, P, cfg.n_max, cfg.budget)
                else:
                    try:
                        f = multiplicative_order(base, P, cfg.budget)
                    except IncompleteFactorization:
                        continue
                    if f > cfg.f_max:
                        continue
                    rows = verify_valuation_trichotomy(base, P, cfg.n_max, cfg.budget)
                checked += 1
                for row in rows:
                    fh.write(json.dumps(row, sort_keys=True) + "\n")
                    written += 1
                    if row["status"] != "OK":
                        violations += 1
    return _json_out(
        {"ideals_checked": checked, "rows": written, "violations": violations}
    )


def cmd_height(cfg: RunConfig, parser) -> int:
    _require(cfg, parser, "d", "base")
    F, base = _field_and_base(cfg)
    h = heights.abs_height(base, cfg.precision)
    return _json_out(
        {
            "lower": _decimal(h.lower, cfg.precision),
            "upper": _decimal(h.upper, cfg.precision),
            "precision_bits": h.precision_bits,
        }
    )


def cmd_abc_quality(cfg: RunConfig, parser) -> int:
    _require(cfg, parser, "d", "base", "out")
    F, base = _field_and_base(cfg)
    with open(cfg.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["n", "H", "Q", "disc", "quality_low", "quality_high", "complete"]
        )
        for n in range(1, cfg.n_max + 1):
            q = heights.abc_quality(base, n, cfg.budget, cfg.precision)
            writer.writerow(
                [
                    n,
                    _decimal(q.height.value, cfg.precision),
                    q.q_low,
                    F.discriminant,
                    repr(q.quality_low),
                    repr(q.quality_high),
                    int(q.complete),
                ]
            )
    return _json_out({"rows": cfg.n_max, "out": cfg.out})


def cmd_s2_verify(cfg: RunConfig, parser) -> int:
    _require(cfg, parser, "d", "base", "out")
    F, base = _field_and_base(cfg)
    report = census.s2_construction(F, base, cfg.q_max, cfg.budget)
    with open(cfg.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["q", "status", "u_norm", "chosen_p", "chosen_conj",
                         "non_wieferich"])
        for row in report.rows:
            writer.writerow(
                [
                    row.q,
                    row.status,
                    row.u_norm,
                    row.chosen[0] if row.chosen else "",
                    row.chosen[1] if row.chosen else "",
                    "" if row.non_wieferich is None else int(row.non_wieferich),
                ]
            )
    return _json_out(
        {
            "distinct_ok": report.distinct_ok,
            "avoid_a1_ok": report.avoid_a1_ok,
            "in_s1_ok": report.in_s1_ok,
            "first_usable_q": report.first_usable_q,
            "skipped": report.skipped,
        }
    )


# -------------------- argument parsing --------------------


def _add(parser, *names, **kw):
    kw.setdefault("default", None)
    parser.add_argument(*names, **kw)


def _common(parser):
    _add(parser, "--config", help="TOML config file merged under explicit flags")
    _add(parser, "--seed", type=int, help="seed for factorization randomness")
    _add(parser, "--budget", type=int, help="factorization iteration budget")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadwief",
        description="Wieferich prime ideals, fundamental units, and "
        "cyclotomic-ideal verification in quadratic fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("unit", help="fundamental unit of Q(sqrt d)")
    _common(p)
    _add(p, "--d", type=int, help="squarefree field parameter d > 1")
    _add(p, "--cap", type=int, help="continued-fraction iteration cap")
    p.set_defaults(func=cmd_unit)

    p = sub.add_parser("aac-check", help="AAC/Mordell equivalence for one d")
    _common(p)
    _add(p, "--d", type=int, help="squarefree d > 2")
    _add(p, "--cap", type=int, help="continued-fraction iteration cap")
    _add(p, "--full", action="store_true", help="include full t, u integers")
    p.set_defaults(func=cmd_aac_check)

    p = sub.add_parser("aac-scan", help="scan a d range for AAC consistency")
    _common(p)
    _add(p, "--d-min", dest="d_min", type=int, help="first d (exclusive of 2)")
    _add(p, "--d-max", dest="d_max", type=int, help="last d")
    _add(p, "--mode", choices=[aac.PRIMES_1MOD4, aac.PRIMES_3MOD4,
                               aac.ALL_SQUAREFREE], help="d filter")
    _add(p, "--cap", type=int, help="continued-fraction iteration cap")
    _add(p, "--full", action="store_true", help="include full t, u integers")
    _add(p, "--out", help="CSV output path")
    p.set_defaults(func=cmd_aac_scan)

    p = sub.add_parser("wieferich-scan", help="census of Wieferich classes")
    _common(p)
    _add(p, "--d", type=int, help="field parameter")
    _add(p, "--base", help="base element literal (grammar: INT or INT+INT*w|s)")
    _add(p, "--limit", type=int, help="scan bound")
    _add(p, "--bound", choices=[census.BOUND_PRIME, census.BOUND_NORM],
         help="interpret limit as rational-prime or ideal-norm bound")
    _add(p, "--jobs", type=int, help="worker processes")
    _add(p, "--engine", choices=["auto", "pure", "kernel"],
         help="classification engine")
    _add(p, "--no-orders", dest="with_orders", action="store_false",
         help="skip multiplicative orders")
    _add(p, "--out", help="CSV output path")
    _add(p, "--checkpoint", help="checkpoint JSON path (default: OUT.ckpt.json)")
    _add(p, "--resume", action="store_true", help="resume from checkpoint")
    _add(p, "--stop-after", dest="stop_after", type=int,
         help="interrupt (exit 3) after this many primes")
    p.set_defaults(func=cmd_wieferich_scan)

    p = sub.add_parser("cyclo-verify", help="valuation trichotomy report")
    _common(p)
    _add(p, "--d", type=int, help="field parameter")
    _add(p, "--base", help="base element literal")
    _add(p, "--n-max", dest="n_max", type=int, help="largest cyclotomic index")
    _add(p, "--norm-limit", dest="norm_limit", type=int,
         help="largest prime-ideal norm")
    _add(p, "--f-max", dest="f_max", type=int, help="largest order f to keep")
    _add(p, "--out", help="JSON-lines output path")
    p.set_defaults(func=cmd_cyclo_verify)

    p = sub.add_parser("height", help="absolute height of an element")
    _common(p)
    _add(p, "--d", type=int, help="field parameter")
    _add(p, "--base", help="element literal")
    _add(p, "--precision", type=int, help="enclosure precision in bits")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("abc-quality", help="abc quality table for x^n triples")
    _common(p)
    _add(p, "--d", type=int, help="field parameter")
    _add(p, "--base", help="base element literal")
    _add(p, "--n-max", dest="n_max", type=int, help="largest exponent n")
    _add(p, "--precision", type=int, help="enclosure precision in bits")
    _add(p, "--out", help="CSV output path")
    p.set_defaults(func=cmd_abc_quality)

    p = sub.add_parser("s2-verify", help="constructive non-Wieferich set checks")
    _common(p)
    _add(p, "--d", type=int, help="field parameter")
    _add(p, "--base", help="base element literal")
    _add(p, "--q-max", dest="q_max", type=int, help="largest prime index q")
    _add(p, "--out", help="CSV output path")
    p.set_defaults(func=cmd_s2_verify)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = build_config(args)
    try:
        return args.func(cfg, parser)
    except QuadwiefError as err:
        json.dump(
            {"error": type(err).__name__, "message": str(err)},
            sys.stderr,
            sort_keys=True,
        )
        sys.stderr.write("\n")
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
