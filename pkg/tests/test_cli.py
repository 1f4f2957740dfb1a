from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import SAMPLE_POINTS
from wallx import cli
from wallx.residue import ZRat, kres
from wallx.serialize import (
    dumps,
    lattice_from_json,
    loci_from_json,
    srat_from_json,
    table_from_json,
    zrat_from_json,
)

GOLDEN = Path(__file__).parent / "golden"
TOY_LATTICE = GOLDEN / "toy_lattice.json"
TOY_VW = GOLDEN / "toy_vw.json"

# (arguments, golden output); paths are relative to GOLDEN
GOLDEN_RUNS = [
    (["expand", "--lattice", "toy_lattice.json", "--table", "toy_vw.json", "--k", "5"], "toy_expand_k5.json"),
    (["expand", "--lattice", "toy_lattice.json", "--table", "toy_vw.json", "--k", "7"], "toy_expand_k7.json"),
    (["invert", "--lattice", "toy_lattice.json", "--table", "toy_expand_k5.json"], "toy_invert_k5.json"),
    (
        ["check-relation", "--lattice", "toy_lattice.json",
         "--table", "toy_expand_k5.json", "--table", "toy_expand_k7.json"],
        "toy_relation.jsonl",
    ),
    (["stability", "--lattice", "toy_lattice.json"], "toy_stability.jsonl"),
    (["master-check", "toy_loci.json"], "toy_master.jsonl"),
    (["residue", "geometric.json"], "geometric_residue.json"),
    (["verify", "--suite", "jacobi", "--range", "10"], "verify_jacobi.jsonl"),
    (["verify", "--suite", "perm", "--n", "3", "--seed", "1"], "verify_perm3.jsonl"),
]


def run(argv, capsys) -> tuple[int, str, str]:
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def records(text: str) -> list:
    return [json.loads(line) for line in text.splitlines()]


def golden_argv(argv):
    return [str(GOLDEN / a) if a.endswith(".json") else a for a in argv]


# -- independent oracle for the toy: one generator e, P_{ne}(k) = n (k + 1), chi = 0 --

def q_at(n: int, x: Fraction) -> Fraction:
    """Closed form (-1)^(n-1) (x^n - x^-n) / (x - 1/x), evaluated directly."""
    sign = 1 if n % 2 else -1
    return sign * (x ** n - x ** -n) / (x - 1 / x)


def vw_at(n: int, x: Fraction) -> Fraction:
    return {1: 1 / x + 2, 2: x / 2, 3: Fraction(-1)}[n]


def toy_pair_at(n: int, k: int, x: Fraction) -> Fraction:
    """Sum over ordered compositions of n, weight 1/len!, factor q(part * (k+1)) vw(part)."""
    lam = k + 1

    def compositions(rest):
        if rest == 0:
            yield ()
            return
        for first in range(1, rest + 1):
            for tail in compositions(rest - first):
                yield (first, *tail)

    total = Fraction(0)
    for parts in compositions(n):
        term = Fraction(1, _factorial(len(parts)))
        for p in parts:
            term *= q_at(p * lam, x) * vw_at(p, x)
        total += term
    return total


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def srat_at(value, x: Fraction) -> Fraction:
    return value.num.evaluate(x) / value.den.evaluate(x)


# -- golden files ---------------------------------------------------------------

@pytest.mark.parametrize("argv,golden", GOLDEN_RUNS, ids=[g for _, g in GOLDEN_RUNS])
def test_golden_outputs_match_exactly(argv, golden, capsys):
    code, out, _ = run(golden_argv(argv), capsys)
    assert code == 0
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


@pytest.mark.parametrize("k,golden", [(5, "toy_expand_k5.json"), (7, "toy_expand_k7.json")])
def test_toy_expand_golden_matches_oracle(k, golden):
    [data] = records((GOLDEN / golden).read_text())
    table, k_file = table_from_json(data, 1)
    assert k_file == k
    assert sorted(table) == [(1,), (2,), (3,)]
    for (n,), value in table.items():
        for x in SAMPLE_POINTS:
            if x * x != 1:
                assert srat_at(value, x) == toy_pair_at(n, k, x)


def test_toy_invert_golden_is_the_input_table():
    [data] = records((GOLDEN / "toy_invert_k5.json").read_text())
    vw, _ = table_from_json(json.loads(TOY_VW.read_text()), 1)
    assert table_from_json(data, 1)[0] == vw


def test_geometric_residue_golden_by_hand():
    # 1 / (1 - z): value 1 at z = 0 and 0 at z = infinity
    [data] = records((GOLDEN / "geometric_residue.json").read_text())
    assert srat_from_json(data["kres"]) == 1
    assert srat_from_json(data["limit_zero"]) == 1
    assert srat_from_json(data["limit_infinity"]) == 0


# -- determinism ------------------------------------------------------------------

@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "master", "--seed", "7", "--n", "40"],
        ["verify", "--suite", "theorem", "--seed", "3", "--n", "2", "--range", "4"],
        ["verify", "--suite", "stability", "--seed", "11", "--n", "50"],
    ],
)
def test_repeated_runs_are_byte_identical(argv, capsys):
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first[0] == 0
    assert first == second


def test_subprocess_entry_point_matches_golden(tmp_path):
    out = tmp_path / "k5.json"
    argv = golden_argv(GOLDEN_RUNS[0][0]) + ["--out", str(out)]
    proc = subprocess.run([sys.executable, "-m", "wallx", *argv], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_bytes() == (GOLDEN / GOLDEN_RUNS[0][1]).read_bytes()


# -- round trips through the parsers ---------------------------------------------

def test_table_outputs_parse_back(capsys):
    code, out, _ = run(golden_argv(GOLDEN_RUNS[0][0]), capsys)
    [data] = records(out)
    table, k = table_from_json(data, 1)
    assert k == 5
    assert dumps(data) + "\n" == out


def test_residue_output_parses_back(capsys):
    code, out, _ = run(["residue", GOLDEN / "geometric.json"], capsys)
    [data] = records(out)
    f = zrat_from_json(data["function"])
    assert f == zrat_from_json(json.loads((GOLDEN / "geometric.json").read_text()))
    assert srat_from_json(data["kres"]) == kres(f)


def test_lattice_round_trip():
    L = lattice_from_json(json.loads(TOY_LATTICE.read_text()))
    assert lattice_from_json(json.loads(dumps(L.to_json()))) == L


def test_master_check_accepts_bare_list(tmp_path, capsys):
    data = json.loads((GOLDEN / "toy_loci.json").read_text())["loci"]
    path = tmp_path / "loci.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(["master-check", path], capsys)
    assert code == 0
    assert records(out)[0]["status"] == "PASS"
    assert len(loci_from_json(data)) == 2


def test_invert_targets_subset(tmp_path, capsys):
    targets = tmp_path / "targets.json"
    targets.write_text("[[2]]")
    code, out, _ = run(["invert", "--lattice", TOY_LATTICE, "--table", GOLDEN / "toy_expand_k5.json",
                        "--targets", targets], capsys)
    assert code == 0
    table, _ = table_from_json(records(out)[0], 1)
    vw, _ = table_from_json(json.loads(TOY_VW.read_text()), 1)
    assert table == {(2,): vw[(2,)]}


def test_out_flag_writes_file(tmp_path, capsys):
    path = tmp_path / "report.jsonl"
    code, out, _ = run(["stability", "--lattice", TOY_LATTICE, "--out", path], capsys)
    assert code == 0 and out == ""
    assert path.read_text() == (GOLDEN / "toy_stability.jsonl").read_text()


# -- exit codes -------------------------------------------------------------------

def test_relation_violation_exits_1(tmp_path, capsys):
    data = json.loads((GOLDEN / "toy_expand_k7.json").read_text())
    data["entries"][1]["value"] = [[[0, 1, 1]], [[0, 1, 1]]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(["check-relation", "--lattice", TOY_LATTICE,
                        "--table", GOLDEN / "toy_expand_k5.json", "--table", bad], capsys)
    assert code == 1
    status = {tuple(r["class"]): r["status"] for r in records(out)}
    assert status == {(1,): "PASS", (2,): "FAIL", (3,): "FAIL"}


def test_zero_quantum_integer_exits_1(capsys):
    # k = -1 makes P_e(k) = 0
    with pytest.warns(Warning):
        code, out, err = run(["invert", "--lattice", TOY_LATTICE, "--table", TOY_VW, "--k", "-1"], capsys)
    assert code == 1
    assert out == "" and "quantum integer" in err


def test_master_check_rejects_fixed_weight(tmp_path, capsys):
    path = tmp_path / "loci.json"
    path.write_text(json.dumps([{"amplitude": 1, "weights": [[1, 0, 1]]}]))
    assert run(["master-check", path], capsys)[0] == 0
    # a = 0 is fixed by the z-torus, so it cannot appear in a fixed-locus normal bundle
    path.write_text(json.dumps([{"amplitude": 1, "weights": [[0, 1, 1]]}]))
    code, _, err = run(["master-check", path], capsys)
    assert code == 2 and "malformed input" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "--lattice", TOY_LATTICE, "--table", TOY_VW],  # no k anywhere
        ["expand", "--table", TOY_VW, "--k", "5"],  # no lattice
        ["expand", "--lattice", TOY_LATTICE, "--table", "/nonexistent.json", "--k", "5"],
        ["check-relation", "--lattice", TOY_LATTICE, "--table", TOY_VW, "--k", "5", "--k", "7"],
        ["residue", TOY_LATTICE],
        ["master-check", TOY_VW],
    ],
)
def test_malformed_input_exits_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert out == "" and err.startswith("wallx: malformed input")


def test_invalid_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["residue", bad], capsys)[0] == 2


def test_missing_table_entry_exits_2(tmp_path, capsys):
    data = json.loads(TOY_VW.read_text())
    data["entries"] = data["entries"][1:]
    path = tmp_path / "partial.json"
    path.write_text(json.dumps(data))
    code, _, err = run(["expand", "--lattice", TOY_LATTICE, "--table", path, "--k", "5"], capsys)
    assert code == 2 and "malformed input" in err


def test_internal_error_exits_3(monkeypatch, capsys):
    def boom(args):
        raise RuntimeError("simulated")

    monkeypatch.setitem(cli.COMMANDS, "stability", boom)
    code, _, err = run(["stability", "--lattice", TOY_LATTICE], capsys)
    assert code == 3 and "internal error" in err


def test_small_framing_warns(capsys):
    with pytest.warns(Warning):
        code, _, _ = run(["expand", "--lattice", TOY_LATTICE, "--table", TOY_VW, "--k", "-3"], capsys)
    assert code == 0


def test_verify_reports_one_record_per_suite(capsys):
    code, out, _ = run(["verify", "--suite", "bundle", "--range", "10"], capsys)
    [rec] = records(out)
    assert code == 0 and rec["check"] == "bundle" and rec["cases"] == 11 and rec["status"] == "PASS"


def test_lattice_validation_failure_exits_2(tmp_path, capsys):
    data = json.loads(TOY_LATTICE.read_text())
    data["chi"] = [["1/1"]]  # not antisymmetric
    path = tmp_path / "lattice.json"
    path.write_text(json.dumps(data))
    assert run(["stability", "--lattice", path], capsys)[0] == 2


def test_zrat_golden_input_value():
    f = zrat_from_json(json.loads((GOLDEN / "geometric.json").read_text()))
    assert f == ZRat.from_terms({0: 1}, {0: 1, 1: -1})
