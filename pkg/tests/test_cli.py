import json

import pytest

from ncfkit import cli, formulas
from ncfkit.dyadic import Dyadic

from conftest import N_ANF, Y_ANF


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_analyze_Y(capsys):
    code, rep = run_json(capsys, "analyze", "--anf", Y_ANF)
    assert code == 0
    assert rep["ncf"] and rep["composition"] == [2, 1, 2] and rep["layer_number"] == 3
    assert rep["structure"]["layers"] == [[[1, 0], [3, 1]], [[4, 0]], [[2, 0], [5, 1]]]
    assert rep["weight"] == {"table": 5, "formula": 5, "oracle": 5}
    assert rep["average_sensitivity"]["formula"] == {"num": "15", "log2den": 4, "decimal": "0.9375"}
    assert rep["average_sensitivity"]["oracle"] == rep["average_sensitivity"]["formula"]
    assert rep["bounds"]["holds"]
    assert rep["most_dominant_variables"] == [1, 3]


def test_analyze_Y_text(capsys):
    code, out, _ = run(capsys, "analyze", "--anf", Y_ANF)
    assert code == 0
    assert "structure: 0 ⊕ (x1)(x3') [ (x4) [ (x2)(x5') ] ]" in out
    assert "average sensitivity (formula): 15/2^4 = 0.9375" in out


def test_analyze_N(capsys):
    code, rep = run_json(capsys, "analyze", "--anf", N_ANF)
    assert code == 2
    assert not rep["ncf"]
    assert rep["reason"]["depth"] == 2
    assert rep["reason"]["residual_anf"] == "x1 + x4"
    assert rep["weight"]["table"] == 14


def test_analyze_xor_bin(capsys):
    code, rep = run_json(capsys, "analyze", "--bin", "0110")
    assert code == 2
    assert rep["canalyzing_triples"] == []
    assert rep["reason"]["depth"] == 1


def test_analyze_hex_and_csv(capsys):
    code, out, _ = run(capsys, "analyze", "--hex", "8", "--n", "2", "--csv")
    assert code == 0
    assert "layer_number,1" in out


def test_analyze_large_n_skips_oracle(capsys):
    code, rep = run_json(capsys, "analyze", "--anf", "x1*x2*x3*x4*x5*x6*x7*x8*x9*x10")
    assert code == 0
    assert "oracle" not in rep["weight"]
    code, _, err = run(capsys, "analyze", "--anf", "x1*x2*x3*x4*x5*x6*x7*x8*x9", "--oracle")
    assert code == 1 and "oracle" in err


@pytest.mark.parametrize("text", ["x1 ++ x2", "x1 + y2"])
def test_analyze_parse_error(capsys, text):
    code, _, err = run(capsys, "analyze", "--anf", text)
    assert code == 1
    assert "position" in err


def test_analyze_size_error(capsys):
    code, _, _ = run(capsys, "analyze", "--anf", "x25")
    assert code == 1


def test_analyze_flags_sign_flip_in_activity_formula(capsys, monkeypatch):
    real = formulas.activity_of_layer
    monkeypatch.setattr(formulas, "activity_of_layer", lambda c, l: Dyadic(0) - real(c, l))
    code, _, err = run(capsys, "analyze", "--anf", Y_ANF)
    assert code == 1
    assert "mismatch" in err


def test_selftest_fails_on_sign_flip(capsys, monkeypatch):
    real = formulas.activity_of_layer
    monkeypatch.setattr(formulas, "activity_of_layer", lambda c, l: Dyadic(0) - real(c, l))
    code, out, _ = run(capsys, "selftest")
    assert code == 1
    assert "FAIL  formula/oracle" in out


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--level", "quick")
    assert code == 0
    assert "7/7 checks passed" in out


def test_count(capsys):
    code, out, _ = run(capsys, "count", "5")
    assert code == 0
    assert out.splitlines() == ["10624", "recursion-check: pass"]
    _, out, _ = run(capsys, "count", "4", "--per-layer")
    assert "32,320,384" in out.splitlines()
    _, out, _ = run(capsys, "count", "2")
    assert out.splitlines()[0] == "8"
    code, rep = run_json(capsys, "count", "4", "--r", "3")
    assert rep["count"] == "384" and rep["total"] == "736"
    assert run(capsys, "count", "1")[0] == 1


def test_count_csv(capsys):
    _, out, _ = run(capsys, "count", "4", "--per-layer", "--csv")
    assert out.splitlines() == ["layer_number,count", "1,32", "2,320", "3,384", "total,736"]


def test_scan_text(capsys):
    code, out, _ = run(capsys, "scan-conjecture", "3")
    assert code == 0
    assert "max average sensitivity: 5/2^2 = 1.25" in out
    assert "argmax (1): (1,2)" in out
    assert "conjecture: consistent" in out


def test_scan_n6_json(capsys):
    code, rep = run_json(capsys, "scan-conjecture", "6")
    assert rep["max"]["num"] == "21" and rep["max"]["log2den"] == 4
    assert [1, 1, 1, 1, 2] in rep["argmax"] and [1, 2, 1, 2] in rep["argmax"]
    assert rep["consistent"]


def test_scan_n7(capsys):
    _, rep = run_json(capsys, "scan-conjecture", "7")
    assert Dyadic.from_json(rep["max"]) == Dyadic(85, 6)
    assert rep["consistent"] and rep["compositions_scanned"] == 32


def test_scan_cap(capsys):
    assert run(capsys, "scan-conjecture", "31")[0] == 1
    assert run(capsys, "scan-conjecture", "12", "--cap", "10")[0] == 1
    _, rep = run_json(capsys, "scan-conjecture", "32", "--pruned")
    assert rep["consistent"] and rep["mode"] == "pruned"


def test_scan_threads(capsys, monkeypatch):
    monkeypatch.setenv("NCFKIT_THREADS", "2")
    _, rep = run_json(capsys, "scan-conjecture", "10")
    assert Dyadic.from_json(rep["max"]) == formulas.lemma42_value(10, 1)


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("NCFKIT_THREADS", "many")
    assert run(capsys, "scan-conjecture", "5")[0] == 1


def test_classify(capsys, monkeypatch):
    _, out, _ = run(capsys, "classify", "2", "--csv")
    assert out == "layer_number,count\n1,8\nnot_ncf,8\n"
    monkeypatch.setenv("NCFKIT_THREADS", "2")
    _, rep = run_json(capsys, "classify", "3")
    assert rep == {"1": 16, "2": 48, "not_ncf": 192}


def test_enumerate_stream(capsys):
    code, out, _ = run(capsys, "enumerate", "3", "--tables")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 64
    assert len({line.split("\t")[1] for line in lines}) == 64
    _, out, _ = run(capsys, "enumerate", "4", "--r", "3", "--json")
    assert len(out.splitlines()) == 384
    assert run(capsys, "enumerate", "4", "--r", "5")[0] == 1


def test_sample_deterministic(capsys):
    _, first, err = run(capsys, "sample", "6", "--seed", "9", "--count", "5")
    _, second, _ = run(capsys, "sample", "6", "--seed", "9", "--count", "5")
    assert first == second and len(first.splitlines()) == 5
    assert "Philox" in err


def test_config_validation():
    with pytest.raises(cli.CLIError):
        cli.Config(input_format="dot")
    with pytest.raises(cli.CLIError):
        cli.Config(n=30)
    with pytest.raises(cli.CLIError):
        cli.Config(cap=1)


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "ncfkit", "count", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("64")
