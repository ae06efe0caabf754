"""Command-line interface: exit codes, determinism, key outputs."""

import json
import os

import pytest

from epigraph.cli import main


@pytest.fixture(scope="module")
def party(graphs_dir):
    return os.path.join(graphs_dir, "party.eg")


@pytest.fixture(scope="module")
def dental(graphs_dir):
    return os.path.join(graphs_dir, "dental.eg")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out) if out else None, err


# ---------------------------------------------------------------------------
# exit codes

def test_exit_zero_on_success(capsys, party):
    code, out, _ = run(capsys, "parse", party)
    assert code == 0
    assert "arguments:" in out


def test_negative_answer_is_zero_unless_strict(capsys, party):
    argv = ("entail", party, "--query", "p(A) > 0.5")
    code, out, _ = run(capsys, *argv)
    assert code == 0 and "does not hold" in out
    code, _, _ = run(capsys, *argv, "--strict")
    assert code == 1


def test_usage_errors_are_two(capsys, party):
    assert run(capsys, "entail", party)[0] == 2            # missing --query
    assert run(capsys, "no-such-command")[0] == 2
    code, _, err = run(capsys, "parse", "/no/such/file.eg")
    assert code == 2 and "error:" in err


def test_bad_formula_is_two(capsys, party):
    code, _, err = run(capsys, "entail", party, "--query", "p(A >")
    assert code == 2 and "bad formula" in err


def test_globals_accepted_on_either_side(capsys, party):
    a = run(capsys, "--pi", "0,0.5,1", "sat", party)
    b = run(capsys, "sat", party, "--pi", "0,0.5,1")
    assert a == b


# ---------------------------------------------------------------------------
# determinism

def test_output_is_byte_identical_across_runs(capsys, party, dental):
    for argv in (
        ("sat", party, "--ternary", "--format", "json"),
        ("dialogue", dental, "--goal", "A", "--pi", "0,0.25,...,1",
         "--format", "json"),
        ("coherence", os.path.join(os.path.dirname(party), "coverage1.eg"),
         "--pi", "0,0.25,...,1", "--format", "json"),
    ):
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second


# ---------------------------------------------------------------------------
# subcommand outputs

def test_sat_ternary_count(capsys, party):
    code, payload, _ = run_json(capsys, "sat", party, "--ternary")
    assert code == 0
    assert payload["count"] == 93


def test_entail_with_explicit_args(capsys):
    code, payload, _ = run_json(
        capsys, "entail", "--assume", "p(A) < 0.2",
        "--query", "p(A & B) < 0.2", "--args", "A,B", "--pi", "0,0.1,...,1")
    assert code == 0 and payload == {"holds": True}


def test_entail_witness_on_failure(capsys):
    code, payload, _ = run_json(
        capsys, "entail", "--query", "p(A) > 0.5", "--args", "A")
    assert code == 0
    assert payload["holds"] is False
    assert "witness" in payload


def test_ddnf_output(capsys):
    code, out, _ = run(capsys, "ddnf", "--query", "p(A) + p(B) <= 0.5",
                       "--args", "A,B")
    assert code == 0
    assert out.count("|") == 2  # three disjuncts under the ternary set


def test_coverage_verdict(capsys, graphs_dir):
    f = os.path.join(graphs_dir, "coverage1.eg")
    pi = "0,0.25,...,1"
    code, payload, _ = run_json(capsys, "coverage", f, "--arg", "A",
                                "--pi", pi)
    assert code == 0 and payload["holds"] is True
    code, payload, _ = run_json(capsys, "coverage", f, "--arg", "C",
                                "--pi", pi, "--mode", "full", "--probe", "D")
    assert payload["holds"] is True


def test_relation_type_output(capsys, graphs_dir):
    f = os.path.join(graphs_dir, "locglob.eg")
    code, payload, _ = run_json(capsys, "relation-type", f,
                                "--rel", "B,A", "--probe", "B,C,D")
    assert code == 0
    assert payload["types"] == ["unspecified"]


def test_coherence_six_flags(capsys, graphs_dir):
    f = os.path.join(graphs_dir, "coverage1.eg")
    code, payload, _ = run_json(capsys, "coherence", f, "--pi", "0,0.25,...,1")
    assert code == 0
    assert set(payload) == {
        "bounded", "entry_bounded", "directly_connected",
        "indirectly_connected", "hidden_connected", "locally_connected",
    }


def test_semantics_extremal(capsys, graphs_dir):
    f = os.path.join(graphs_dir, "episem5.eg")
    code, payload, _ = run_json(capsys, "semantics", f, "--order", "B",
                                "--direction", "max", "--entropy")
    assert code == 0
    assert payload["count"] == 2
    assert payload["entropy"] == [0.0, 0.0]


def test_verify_correspondence(capsys, graphs_dir):
    code, out, _ = run(capsys, "verify-correspondence",
                       os.path.join(graphs_dir, "grd.adf"), "--kind", "adf")
    assert code == 0 and out.strip().endswith("ok")
    code, out, _ = run(capsys, "verify-correspondence",
                       os.path.join(graphs_dir, "cafx.eg"), "--kind", "caf")
    assert code == 0 and out.strip().endswith("ok")


def test_dialogue_subcommand(capsys, dental):
    code, payload, _ = run_json(
        capsys, "dialogue", dental, "--goal", "A", "--pi", "0,0.05,...,1",
        "--assert", "p(F)>0.5")
    assert code == 0
    assert payload["consistent"] is True
    assert payload["ranges"]["A"] == ["17/20", "1"]
    assert payload["ranges"]["B"] == ["7/10", "1"]


def test_dialogue_conflict(capsys, dental):
    code, payload, _ = run_json(
        capsys, "dialogue", dental, "--goal", "A", "--pi", "0,0.05,...,1",
        "--assert", "p(F)>0.5", "--assert", "p(B)<0.5")
    assert code == 0
    assert payload["consistent"] is False
    assert sorted(c["argument"] for c in payload["conflict"]) == ["B", "F"]


def test_validate_reports_issues(capsys, tmp_path):
    bad = tmp_path / "bad.eg"
    bad.write_text("arguments:\nA\n\nedges:\nA -> A []\n\nconstraints:\n")
    code, payload, _ = run_json(capsys, "validate", str(bad))
    assert code == 0
    assert payload["ok"] is False
    assert any("self-loop" in i for i in payload["issues"])
