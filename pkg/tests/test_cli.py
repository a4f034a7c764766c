import csv
import json
import os
import subprocess
import sys

import pytest

from quadwief.cli import RunConfig, build_parser, dispatch

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

SUBCOMMANDS = [
    "unit",
    "aac-check",
    "aac-scan",
    "wieferich-scan",
    "cyclo-verify",
    "height",
    "abc-quality",
    "s2-verify",
]


def run_cli(args, **kw):
    env = dict(os.environ)
    env["COLUMNS"] = "100"
    env.update(kw.pop("env", {}))
    return subprocess.run(
        [sys.executable, "-m", "quadwief.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        **kw,
    )


@pytest.mark.parametrize("name", ["main"] + SUBCOMMANDS)
def test_help_golden(name, monkeypatch):
    monkeypatch.setenv("COLUMNS", "100")
    parser = build_parser()
    if name == "main":
        text = parser.format_help()
    else:
        text = parser._subparsers._group_actions[0].choices[name].format_help()
    with open(os.path.join(GOLDEN, f"help_{name}.txt")) as fh:
        assert text == fh.read()


def test_unit_json():
    res = run_cli(["unit", "--d", "7"])
    assert res.returncode == 0
    assert json.loads(res.stdout) == {"t": "8", "u": "3", "norm": 1}


def test_unit_d5():
    res = run_cli(["unit", "--d", "5"])
    assert json.loads(res.stdout) == {"t": "1", "u": "1", "norm": -1}


def test_domain_error_exit_code():
    res = run_cli(["aac-check", "--d", "12"])
    assert res.returncode == 1
    err = json.loads(res.stderr)
    assert err["error"] == "NotSquarefree"


def test_usage_error_exit_code():
    res = run_cli(["no-such-command"])
    assert res.returncode == 2
    res = run_cli(["unit", "--bogus"])
    assert res.returncode == 2


def test_missing_required_option():
    res = run_cli(["unit"])
    assert res.returncode == 2
    assert "--d" in res.stderr


def test_wieferich_scan_csv(tmp_path):
    out = tmp_path / "w.csv"
    res = run_cli(
        ["wieferich-scan", "--d", "5", "--base", "2", "--limit", "1200",
         "--out", str(out)]
    )
    assert res.returncode == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["p"] == "2" and rows[0]["flags"] == "BASE_IN_IDEAL"
    wief = [r for r in rows if r["class"] == "WIEFERICH"]
    assert {(r["p"], r["kind"]) for r in wief} == {("5", "RAMIFIED"), ("1093", "INERT")}
    summary = json.loads(res.stdout)
    assert summary["status"] == "complete"
    assert summary["counts"]["WIEFERICH"] == 2


def test_wieferich_scan_interrupt_and_resume(tmp_path):
    out = tmp_path / "w.csv"
    args = ["wieferich-scan", "--d", "5", "--base", "2", "--limit", "2000",
            "--out", str(out)]
    res = run_cli(args + ["--stop-after", "100"])
    assert res.returncode == 3
    res = run_cli(args + ["--resume"])
    assert res.returncode == 0
    with open(out, newline="") as fh:
        resumed = fh.read()
    out2 = tmp_path / "w2.csv"
    res = run_cli(["wieferich-scan", "--d", "5", "--base", "2", "--limit",
                   "2000", "--out", str(out2)])
    with open(out2, newline="") as fh:
        assert fh.read() == resumed


def test_cyclo_verify_jsonl(tmp_path):
    out = tmp_path / "rows.jsonl"
    res = run_cli(
        ["cyclo-verify", "--d", "5", "--base", "2", "--n-max", "40",
         "--norm-limit", "60", "--out", str(out)]
    )
    assert res.returncode == 0
    summary = json.loads(res.stdout)
    assert summary["violations"] == 0 and summary["rows"] > 0
    with open(out) as fh:
        rows = [json.loads(line) for line in fh]
    assert all(set(r) == {"n", "p", "conj", "expected", "actual", "status"}
               for r in rows)


def test_height_json():
    res = run_cli(["height", "--d", "2", "--base", "1+1*s"])
    obj = json.loads(res.stdout)
    assert obj["precision_bits"] == 128
    assert obj["lower"].startswith("1.5537739740300373")
    assert obj["upper"].startswith("1.5537739740300373")


def test_abc_quality_csv(tmp_path):
    out = tmp_path / "q.csv"
    res = run_cli(
        ["abc-quality", "--d", "5", "--base", "2", "--n-max", "6",
         "--out", str(out)]
    )
    assert res.returncode == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["n"] for r in rows] == [str(n) for n in range(1, 7)]
    assert rows[0]["Q"] == "4" and rows[0]["disc"] == "5"
    assert float(rows[0]["quality_low"]) <= 0.46275642631951835 <= float(
        rows[0]["quality_high"]
    )
    assert all(r["complete"] == "1" for r in rows)


def test_s2_verify_csv(tmp_path):
    out = tmp_path / "s2.csv"
    res = run_cli(
        ["s2-verify", "--d", "5", "--base", "2", "--q-max", "13", "--out", str(out)]
    )
    assert res.returncode == 0
    summary = json.loads(res.stdout)
    assert summary["distinct_ok"] and summary["in_s1_ok"]
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["q"] for r in rows] == ["2", "3", "5", "7", "11", "13"]


def test_aac_scan_csv(tmp_path):
    out = tmp_path / "aac.csv"
    res = run_cli(
        ["aac-scan", "--d-min", "3", "--d-max", "50", "--mode",
         "ALL_SQUAREFREE", "--out", str(out)]
    )
    assert res.returncode == 0
    summary = json.loads(res.stdout)
    assert summary["counterexamples"] == 1  # d = 46
    assert summary["inconsistent"] == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    d46 = [r for r in rows if r["d"] == "46"]
    assert any(r["p"] == "23" and r["u_mod_p"] == "0" for r in d46)


def test_config_file_and_env_merge(tmp_path):
    cfgfile = tmp_path / "run.toml"
    cfgfile.write_text("[field]\nd = 7\n")
    res = run_cli(["unit", "--config", str(cfgfile)])
    assert json.loads(res.stdout) == {"t": "8", "u": "3", "norm": 1}
    # explicit flag wins over config
    res = run_cli(["unit", "--config", str(cfgfile), "--d", "5"])
    assert json.loads(res.stdout)["t"] == "1"
    # environment wins over config but loses to flags
    res = run_cli(["unit", "--config", str(cfgfile)],
                  env={"QUADWIEF_FIELD_D": "13"})
    assert json.loads(res.stdout) == {"t": "3", "u": "1", "norm": -1}
    res = run_cli(["unit", "--config", str(cfgfile), "--d", "2"],
                  env={"QUADWIEF_FIELD_D": "13"})
    assert json.loads(res.stdout)["t"] == "1"


def test_runconfig_toml_roundtrip():
    cfg = RunConfig(d=5, base="1+1*w", limit=777, jobs=3, full=True,
                    out="x.csv", strictness="PAIRWISE_DISTINCT")
    text = cfg.to_toml()
    assert RunConfig.from_toml(text) == cfg
    # defaults survive as well
    assert RunConfig.from_toml(RunConfig().to_toml()) == RunConfig()


def test_dispatch_inprocess(capsys):
    code = dispatch(["unit", "--d", "7"])
    assert code == 0
    assert json.loads(capsys.readouterr().out) == {"t": "8", "u": "3", "norm": 1}
