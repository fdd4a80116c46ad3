import subprocess
import sys

import pytest

from conftest import FIXTURES, same_language
from unaryfa import ChrobakNF, ambiguity_chrobak, parse_uaf
from unaryfa.cli import run


def fx(name):
    return str(FIXTURES / name)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compare_subset_holds(capsys):
    code, out, _ = call(capsys, "compare", "--relation", "subset", fx("evens.uaf"), fx("all.uaf"))
    assert code == 0 and out == "holds\n"


def test_compare_equal_witness(capsys):
    code, out, _ = call(capsys, "compare", "--relation", "equal", fx("odds.uaf"), fx("evens.uaf"))
    assert code == 1 and out == "witness 0\n"


def test_universal_odds(capsys):
    for mode in ("thm2", "exact", "modular"):
        code, out, _ = call(capsys, "universal", "--mode", mode, fx("odds.uaf"))
        assert code == 1 and out == "witness 0\n"
    code, out, _ = call(capsys, "universal", fx("all.uaf"))
    assert code == 0


def test_universal_exact_needs_ufa(capsys):
    code, _, err = call(capsys, "universal", "--mode", "exact", fx("ambiguous.uaf"))
    assert code == 2 and "ambiguous at length 2" in err


def test_inclusion(capsys):
    code, out, _ = call(capsys, "inclusion", fx("mult4.uaf"), fx("evens.uaf"))
    assert code == 0
    code, out, _ = call(capsys, "inclusion", fx("evens.uaf"), fx("mult4.uaf"))
    assert code == 1 and out == "witness 2\n"


def test_ambiguity(capsys):
    code, out, _ = call(capsys, "ambiguity", fx("stem_two_cycles.uaf"))
    assert code == 1 and out == "Ambiguous\nwitness 2\n"
    code, out, _ = call(capsys, "ambiguity", fx("ufa_mixed.uaf"))
    assert code == 0 and out == "Unambiguous\n"


def test_convert_and_complement(capsys, tmp_path):
    out_file = tmp_path / "c.uaf"
    code, _, _ = call(capsys, "convert", fx("evens_dfa.uaf"), "-o", str(out_file))
    assert code == 0
    c = parse_uaf(out_file.read_text())
    assert same_language(c, parse_uaf((FIXTURES / "evens.uaf").read_text()))
    code, out, _ = call(capsys, "convert", fx("branching.uaf"), "--determinize")
    assert len(parse_uaf(out).cycles) == 1
    code, out, _ = call(capsys, "convert", fx("evens.uaf"), "--to", "nfa")
    assert "kind nfa" in out
    code, out, _ = call(capsys, "complement", fx("evens.uaf"))
    assert parse_uaf(out) == parse_uaf((FIXTURES / "odds.uaf").read_text())


@pytest.mark.parametrize(
    "name,inputs,expect",
    [
        ("union", ["mult4.uaf", "evens.uaf"], ChrobakNF.of("", "10")),
        ("symdiff", ["evens.uaf", "mult3.uaf"], ChrobakNF.of("", "001110")),
        ("intersect", ["evens.uaf", "mult3.uaf"], ChrobakNF.of("", "100000")),
        ("disjoint-union", ["evens.uaf", "odds.uaf"], ChrobakNF.of("", "1")),
        ("concat", ["evens.uaf", "odds.uaf"], ChrobakNF.of("", "01")),
        ("concat-bits", ["evens.uaf", "odds.uaf"], ChrobakNF.of("", "01")),
        ("star", ["path2.uaf"], ChrobakNF.of("", "10")),
    ],
)
def test_op(capsys, name, inputs, expect):
    code, out, _ = call(capsys, "op", name, *[fx(i) for i in inputs])
    assert code == 0
    assert same_language(parse_uaf(out), expect)


def test_op_arity(capsys):
    code, _, err = call(capsys, "op", "star", fx("evens.uaf"), fx("odds.uaf"))
    assert code == 2 and "usage" in err


def test_union_rejects_ambiguous(capsys):
    code, _, err = call(capsys, "op", "union", fx("ambiguous.uaf"), fx("evens.uaf"))
    assert code == 2 and "AmbiguousInput" in err


def test_eval(capsys, tmp_path):
    code, out, _ = call(
        capsys, "eval", "A ∪ complement(A) = ALL", "--bind", f"A={fx('ufa_mixed.uaf')}"
    )
    assert code == 0 and out == "true\n"
    code, out, _ = call(capsys, "eval", "A ⊆ B", "--bind", f"A={fx('evens.uaf')}", "--bind", f"B={fx('mult4.uaf')}")
    assert code == 1 and out == "false\n"
    code, _, err = call(capsys, "eval", "A · A", "--bind", f"A={fx('evens.uaf')}")
    assert code == 2 and "ConcatDisallowed" in err
    code, out, _ = call(capsys, "eval", "A · A", "--bind", f"A={fx('evens.uaf')}", "--allow-concat")
    assert code == 0 and same_language(parse_uaf(out), ChrobakNF.of("", "10"))
    code, _, _ = call(capsys, "eval", "A", "--bind", "A")
    assert code == 2


def test_gen_prop1(capsys, tmp_path):
    code, out, _ = call(capsys, "gen", "prop1", "--cnf", fx("unsat.cnf"), "--manifest", str(tmp_path / "m.txt"))
    assert code == 0
    assert "primes 11 13" in (tmp_path / "m.txt").read_text()
    nfa = tmp_path / "p.uaf"
    nfa.write_text(out)
    code, out, _ = call(capsys, "universal", str(nfa))
    assert code == 0
    code, _, _ = call(capsys, "gen", "prop1", "--cnf", fx("sat.cnf"), "--out-dir", str(tmp_path / "sat"))
    assert code == 0
    code, out, _ = call(capsys, "universal", str(tmp_path / "sat" / "nfa.uaf"))
    assert code == 1


def test_gen_prop1_three_occur(capsys, tmp_path):
    code, _, err = call(capsys, "gen", "prop1", "--cnf", fx("four_occur.cnf"))
    assert code == 2 and "NotThreeOccur" in err
    code, _, _ = call(capsys, "gen", "prop1", "--cnf", fx("four_occur.cnf"), "--three-occur")
    assert code == 0


def test_gen_formula(capsys, tmp_path):
    d = tmp_path / "f"
    code, out, _ = call(capsys, "gen", "formula", "--cnf", fx("unsat.cnf"), "--out-dir", str(d))
    assert code == 0 and "modulus" in out
    h1 = parse_uaf((d / "h1.uaf").read_text())
    assert ambiguity_chrobak(h1).unambiguous
    binds = [f"--bind=H1={d / 'h1.uaf'}", f"--bind=H2={d / 'h2.uaf'}", f"--bind=K={d / 'k.uaf'}"]
    code, out, _ = call(capsys, "eval", "(H1 ∩ H2) · K = ALL", *binds, "--allow-concat")
    assert code == 0 and out == "true\n"
    code, _, _ = call(capsys, "gen", "formula", "--cnf", fx("unsat.cnf"))
    assert code == 2


def test_gen_blowup(capsys, tmp_path):
    code, out, _ = call(capsys, "gen", "concat-blowup", "--m", "4", "--out-dir", str(tmp_path))
    assert code == 0
    assert "modulus 175\n" in out and "residue 173\n" in out and "primes 5 7\n" in out
    code, _, _ = call(capsys, "gen", "concat-blowup", "--out-dir", str(tmp_path))
    assert code == 2


def test_oracle_commands(capsys):
    code, out, _ = call(capsys, "oracle", "bits", fx("evens.uaf"), "--upto", "6")
    assert code == 0 and out == "101010\nthreshold 0\nperiod 2\n"
    code, out, _ = call(capsys, "oracle", "universal", fx("odds.uaf"))
    assert code == 1 and out == "witness 0\n"
    code, out, _ = call(capsys, "oracle", "subset", fx("mult4.uaf"), fx("evens.uaf"))
    assert code == 0
    code, out, _ = call(capsys, "oracle", "equal", fx("evens.uaf"), fx("odds.uaf"))
    assert code == 1 and out == "witness 0\n"
    code, _, _ = call(capsys, "oracle", "subset", fx("evens.uaf"))
    assert code == 2


def test_oracle_inexact(capsys):
    code, _, _ = call(capsys, "oracle", "universal", fx("ufa_mixed.uaf"), "--cap", "3")
    assert code == 3


def test_guard_exit(capsys):
    code, _, err = call(capsys, "convert", fx("branching.uaf"), "--determinize", "--guard", "5")
    assert code == 3 and "GuardExceeded" in err


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.uaf"
    bad.write_text("uaf 1\nkind nope\n")
    assert call(capsys, "ambiguity", str(bad))[0] == 2
    assert call(capsys, "ambiguity", str(tmp_path / "missing.uaf"))[0] == 2
    assert call(capsys, "frobnicate")[0] == 2


def test_bench_csv(capsys, tmp_path):
    out = tmp_path / "b.csv"
    code, _, _ = call(capsys, "bench", "--suite", "hardness-roundtrip", "--csv", str(out), "--no-timing")
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "case,algorithm,n_in,n_out,time_ms,verdict"
    assert len(lines) == 13
    assert call(capsys, "bench", "--suite", "nope")[0] == 2


def test_stdin_pipeline():
    """gen prop1 --cnf unsat.cnf | universal -"""
    cmd = [sys.executable, "-m", "unaryfa.cli"]
    gen = subprocess.run(cmd + ["gen", "prop1", "--cnf", fx("unsat.cnf")], capture_output=True, text=True)
    assert gen.returncode == 0
    uni = subprocess.run(cmd + ["universal", "-"], input=gen.stdout, capture_output=True, text=True)
    assert uni.returncode == 0 and uni.stdout == "holds\n"
