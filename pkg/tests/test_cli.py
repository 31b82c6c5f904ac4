import subprocess
import sys

import pytest

from probmine.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_translate_dialectica(capsys):
    code, out, _ = run(capsys, "translate", "--dialectica", "all x:0. ex y:0. y >=0 x")
    assert (code, out) == (0, "ex Y:0(0). all x:0. (Y x) >=0 x\n")


def test_translate_header_is_opt_in(capsys):
    _, out, _ = run(capsys, "translate", "--mr", "--header", "all x:0. ex y:0. y >=0 x")
    assert out.splitlines() == ["witness: Y:0(0)", "ex Y:0(0). all x:0. (Y x) >=0 x"]


def test_fluct(capsys):
    assert run(capsys, "fluct", "--seq", "0,1,0,1", "--k", "1", "--horizon", "4")[:2] == (0, "3\n")


def test_verify_outer_oracle(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "outer-oracle", "--model", "sub4.model", "--seed", "7")
    assert code == 0
    assert out.startswith("PASS suite=outer-oracle model=sub4 seed=7 cases=")


def test_output_is_deterministic(capsys):
    argv = ("verify", "--suite", "roundtrip", "--seed", "3", "--count", "20")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_parse_error_names_token_and_grammar(capsys):
    code, _, err = run(capsys, "parse", "all x:0. ex y:0. y >=0 + x")
    assert code == 2
    assert "offending token: +" in err
    assert "usage: probmine parse" in err


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2
    assert "frobnicate" in err


def test_eval_exit_codes(capsys):
    assert run(capsys, "eval", "all x:0. ex y:0. y >=0 x", "--model", "two")[:2] == (0, "true\n")
    assert run(capsys, "eval", "all x:0. ex y:0. y >0 x", "--model", "two", "--nat", "2")[:2] == (1, "false\n")


def test_eval_with_environment(capsys):
    code, out, _ = run(capsys, "eval", "Pr[ w in B ] >= 1/2", "--model", "sub4", "--env", "B={a b}")
    assert (code, out) == (0, "true\n")


def test_prob_interpret(capsys):
    code, out, _ = run(capsys, "prob", "interpret", "all k:0. Pr[ ex n:0. ex i <= n : 0. k <=0 i & w in A i ] >= 1",
                       "--ctx", "A:Ev(0)", "--mode", "c")
    assert code == 0
    assert out.splitlines()[0].startswith("kind: PlusTwo")


def test_rewrite_prints_principles(capsys):
    code, out, _ = run(capsys, "rewrite", "all x:0. Pr[ w in S x ] >= 1/2", "--rule", "R5",
                       "--ctx", "S:Ev(0)", "--assume", "AntiMonotone")
    assert code == 0
    assert out.splitlines() == ["Pr[ all x:0. w in (S x) ] >= 1/2", "principles: ClassicalLogic, UB_Omega(0)"]


def test_rewrite_refusal_is_a_fail(capsys):
    code, out, _ = run(capsys, "rewrite", "all x:0. Pr[ w in S x ] >= 1/2", "--rule", "R5", "--ctx", "S:Ev(0)")
    assert code == 1
    assert out.startswith("FAIL side condition unmet: AntiMonotone")


def test_schema_ub(capsys):
    code, out, _ = run(capsys, "schema", "ub", "--rho", "0", "--sort", "omega")
    assert code == 0
    assert out.splitlines()[0] == "principle: UB_Omega(0)"


def test_schema_cc(capsys):
    code, out, _ = run(capsys, "schema", "cc", "--sort", "ev", "--beta", "Ev")
    assert out.splitlines()[0] == "principle: CC0_S"


def test_sigma_add(capsys):
    code, out, _ = run(capsys, "sigma-add")
    assert code == 0 and len(out.splitlines()) == 2


def test_modulus_transform(capsys):
    assert run(capsys, "modulus", "transform", "--expr", "m + x")[:2] == (0, "m + 2*x + 1\n")


def test_modulus_check_fail_carries_witness(capsys):
    code, out, _ = run(capsys, "modulus", "check", "--kind", "PlusTwo", "--expr", "0",
                       "--data", '[[["a"], ["a", "b"]]]', "--model", "two", "--nat", "3")
    assert code == 1
    assert out.startswith("FAIL kind=PlusTwo model=two witness=m=2,x=0")


def test_bad_model_name(capsys):
    code, _, err = run(capsys, "eval", "c =0 0", "--model", "nowhere", "--env", "c=0")
    assert code == 2 and "offending token: nowhere" in err


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "probmine.cli", "fluct", "--seq", "0,1,0,1", "--k", "1"],
                         capture_output=True, text=True)
    assert (out.returncode, out.stdout) == (0, "3\n")
