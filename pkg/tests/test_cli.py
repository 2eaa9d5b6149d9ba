from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from asyring.applications import connected_chords
from asyring.cli import main
from asyring.records import parse_rational

TABLE1_C = ["1/1", "-5/2", "-43/8", "-579/16", "-44477/128", "-5326191/1280", "-180306541/3072",
            "-203331297947/215040", "-58726239094693/3440640"]
TABLE2 = ["1/1", "-4/1", "2/1", "-40/3", "-182/3", "-7624/15", "-202652/45", "-14115088/315",
          "-30800534/63", "-16435427656/2835"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table_csv_matches_table(capsys):
    code, out, _ = run(capsys, "table", "chords", "--order", "12", "--asy-order", "9", "--format", "csv")
    assert code == 0
    rows = csv_rows(out)
    assert [r["value"] for r in rows if r["kind"] == "asy"] == TABLE1_C
    assert [r["value"] for r in rows if r["kind"] == "series"][:6] == ["0/1", "1/1", "1/1", "4/1", "27/1", "248/1"]


def test_table_json_simple_perms(capsys):
    code, out, _ = run(capsys, "table", "simple-perms", "--order", "14", "--asy-order", "10", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["table"]["asy"] == TABLE2
    assert rec["table"]["asy_prefactor"] == {"exp_arg": "-2/1", "sqrt_two_pi_pow": 0}
    assert rec["verification"]["routes_agree"] is True
    assert rec["routes"] == ["chain-rule", "closed-form"]
    assert list(rec) == sorted(rec)


def test_table_pretty(capsys):
    code, out, _ = run(capsys, "table", "monolithic", "--order", "8", "--asy-order", "3")
    assert code == 0
    assert "A f = (2*pi)^(-1/2)" in out
    assert "-154/3" not in out


def test_asy_order_zero(capsys):
    code, out, _ = run(capsys, "table", "chords", "--asy-order", "0", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["table"]["asy"] == [] and len(rec["table"]["series"]) == 17


def test_csv_and_json_agree(capsys):
    _, js, _ = run(capsys, "table", "monolithic", "--order", "10", "--asy-order", "6", "--format", "json")
    _, cs, _ = run(capsys, "table", "monolithic", "--order", "10", "--asy-order", "6", "--format", "csv")
    rec = json.loads(js)["table"]
    rows = csv_rows(cs)
    assert [r["value"] for r in rows if r["kind"] == "series"] == rec["series"]
    assert [r["value"] for r in rows if r["kind"] == "asy"] == rec["asy"]
    by_kind = {r["kind"]: r["value"] for r in rows}
    assert by_kind["prefactor_exp_arg"] == rec["asy_prefactor"]["exp_arg"]
    assert int(by_kind["prefactor_sqrt_two_pi_pow"]) == rec["asy_prefactor"]["sqrt_two_pi_pow"]


def test_json_roundtrip_bit_exact(capsys):
    _, js, _ = run(capsys, "table", "chords", "--order", "20", "--asy-order", "12", "--format", "json")
    rec = json.loads(js)["table"]
    t = connected_chords(20, asy_terms=12)
    assert [parse_rational(v) for v in rec["series"]] == list(t.series)
    assert [parse_rational(v) for v in rec["asy"]] == list(t.asy)
    assert json.loads(json.dumps(rec)) == rec


def test_resource_guard(capsys):
    code, _, err = run(capsys, "table", "chords", "--order", "513")
    assert code == 2 and "--allow-large" in err
    code, _, _ = run(capsys, "table", "chords", "--asy-order", "600")
    assert code == 2


def test_usage_errors(capsys):
    assert run(capsys, "table", "nonsense")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "table", "chords", "--order", "-1")[0] == 2
    assert run(capsys, "table", "simple-perms", "--order", "3")[0] == 2


@pytest.fixture
def factorial_file(tmp_path):
    p = tmp_path / "fact.txt"
    p.write_text("".join(f"{math.factorial(n)}\n" for n in range(121)))
    return p


@pytest.fixture
def chords_bfile(tmp_path):
    t = connected_chords(200, asy_terms=0)
    p = tmp_path / "b000699.txt"
    p.write_text("# A000699\n0 1\n" + "".join(f"{n} {t.series[n]}\n" for n in range(1, 201)))
    return p


def test_fit_factorials(capsys, factorial_file):
    code, out, err = run(capsys, "fit", str(factorial_file), "--alpha", "1", "--beta", "1", "--terms", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["estimates"][0] == pytest.approx(1.0, abs=1e-6)
    assert "converged" in err


def test_fit_bfile_ratios(capsys, chords_bfile):
    code, out, _ = run(capsys, "fit", str(chords_bfile), "--alpha", "2", "--beta", "1/2", "--terms", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["ratios_to_c0"][1] == pytest.approx(-2.5, rel=1e-4)


def test_fit_nonconvergence_exit_code(capsys, tmp_path):
    p = tmp_path / "sq.txt"
    p.write_text("".join(f"{math.factorial(n) ** 2}\n" for n in range(80)))
    code, out, _ = run(capsys, "fit", str(p), "--alpha", "1", "--beta", "1")
    assert code == 1
    assert json.loads(out)["converged"] == [False]


def test_fit_parse_errors(capsys, tmp_path, monkeypatch):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    code, _, err = run(capsys, "fit", str(empty), "--alpha", "1", "--beta", "1")
    assert code == 2 and "no data" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("1\n2\n3.5\n")
    code, _, err = run(capsys, "fit", str(bad), "--alpha", "1", "--beta", "1")
    assert code == 2 and "line 3" in err
    gap = tmp_path / "gap.txt"
    gap.write_text("0 1\n1 1\n3 2\n")
    assert run(capsys, "fit", str(gap), "--alpha", "1", "--beta", "1")[0] == 2
    assert run(capsys, "fit", str(tmp_path / "missing.txt"), "--alpha", "1", "--beta", "1")[0] == 2
    assert run(capsys, "fit", str(bad), "--alpha", "x", "--beta", "1")[0] == 2
    monkeypatch.setattr(sys, "stdin", io.StringIO("1\n1\n"))
    assert run(capsys, "fit", "--alpha", "1", "--beta", "1")[0] == 2  # too short


def test_fit_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("".join(f"{math.factorial(n)}\n" for n in range(60))))
    code, out, _ = run(capsys, "fit", "-", "--alpha", "1", "--beta", "1")
    assert code == 0 and json.loads(out)["estimates"][0] == pytest.approx(1.0, abs=1e-6)


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "identities", "--instances", "4", "--seed", "7")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines and all(l.startswith("PASS ") and "seed=7" in l for l in lines)


def test_verify_applications(capsys):
    code, out, _ = run(capsys, "verify", "applications")
    assert code == 0
    assert "PASS chords.asy_table" in out and "PASS simple-perms.asy_table" in out


def test_verify_remainders(capsys):
    code, out, _ = run(capsys, "verify", "remainders")
    assert code == 0
    assert out.count("PASS") == 6


def test_verify_failure_exit_code(capsys, monkeypatch):
    from asyring import checks

    monkeypatch.setitem(checks.IDENTITY_LAWS, "broken.law", lambda rng, order: False)
    code, out, _ = run(capsys, "verify", "identities", "--instances", "2", "--seed", "3")
    assert code == 1
    assert "FAIL broken.law instances=2 seed=3" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "asyring", "table", "chords", "--order", "6", "--asy-order", "3",
                           "--format", "csv"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "-43/8" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "asyring", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
