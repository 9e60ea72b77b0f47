"""Command line behaviour: output shapes and exit codes."""

from __future__ import annotations

import pytest

from netproc.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# transitions / lts
# ---------------------------------------------------------------------------


def test_transitions_lists_steps_with_universe_header(capsys):
    code, out, _ = run_cli(capsys, "transitions", "a!m0 | a -> b")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "values: m0,m1"
    assert any(line.startswith("tau") for line in lines[1:])
    assert any(line.startswith("a!m0") for line in lines[1:])


def test_transitions_respects_values_flag(capsys):
    code, out, _ = run_cli(capsys, "--values", "ping,pong", "transitions", "a -> b")
    assert code == 0
    assert out.splitlines()[0] == "values: ping,pong"
    assert "a?ping" in out and "a?pong" in out


def test_values_env_variable(capsys, monkeypatch):
    monkeypatch.setenv("NETPROC_VALUES", "v")
    code, out, _ = run_cli(capsys, "transitions", "a -> b")
    assert code == 0
    assert out.splitlines()[0] == "values: v"


def test_lts_text_output(capsys):
    code, out, _ = run_cli(capsys, "lts", "a!m0 | a -> b")
    assert code == 0
    assert "states:" in out and "mode:" in out
    assert "--tau-->" in out


def test_lts_dot_output(capsys):
    code, out, _ = run_cli(capsys, "lts", "a!m0", "--dot")
    assert code == 0
    assert out.startswith("digraph lts {")
    assert out.rstrip().endswith("}")
    assert 'n0 [label="a!m0"];' in out


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def test_check_proven_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "check", "dup a | dup a", "dup a")
    assert code == 0
    assert "verdict: proven-bisimilar" in out


def test_check_distinguished_exits_one_and_prints_play(capsys):
    code, out, _ = run_cli(capsys, "check", "a -> b", "a -> c")
    assert code == 1
    assert "verdict: distinguished" in out
    assert "distinguishing play:" in out


def test_check_inconclusive_exits_two(capsys):
    code, out, _ = run_cli(
        capsys, "check", "dup a | dup a", "dup a", "--no-upto", "--max-pairs", "16"
    )
    assert code == 2
    assert "verdict: inconclusive" in out
    assert "bound hit: max-pairs" in out


def test_check_weak_flag(capsys):
    code, out, _ = run_cli(capsys, "check", "new t. (t!m0 | lose t)", "0", "--weak")
    assert code == 0
    assert "verdict: proven-bisimilar" in out


def test_check_emit_witness_writes_pair_file(capsys, tmp_path):
    target = tmp_path / "witness.txt"
    code, out, _ = run_cli(
        capsys, "check", "dup a | dup a", "dup a", "--emit-witness", str(target)
    )
    assert code == 0
    assert f"-> {target}" in out
    lines = target.read_text().splitlines()
    assert lines == ["a => [a, a] ~ a => [a, a] | a => [a, a]"]


# ---------------------------------------------------------------------------
# laws
# ---------------------------------------------------------------------------


def test_laws_only_selected_ids(capsys):
    code, out, _ = run_cli(capsys, "laws", "--only", "par-comm,par-unit-left")
    assert code == 0
    assert "par-comm" in out and "par-unit-left" in out
    assert "par-assoc" not in out
    assert "laws: PASS" in out


# ---------------------------------------------------------------------------
# explore / simulate
# ---------------------------------------------------------------------------


def test_explore_reports_profiles(capsys):
    code, out, _ = run_cli(
        capsys,
        "explore",
        "new t. (s -> t | t -> r1 | t -> r2 | t -> r3)",
        "--inject",
        "s=m0",
    )
    assert code == 0
    assert "partial: false" in out
    assert "r1!m0" in out and "r2!m0" in out and "r3!m0" in out


def test_explore_query_exit_codes(capsys):
    net = "new t. (s -> t | t -> r1 | t -> r2 | t -> r3)"
    code, out, _ = run_cli(capsys, "explore", net, "--inject", "s=m0", "--query", "r1 = 1")
    assert code == 0
    assert "satisfied" in out
    code, out, _ = run_cli(capsys, "explore", net, "--inject", "s=m0", "--query", "total >= 2")
    assert code == 1
    assert "unsatisfied" in out


def test_simulate_prints_seeded_trace(capsys):
    code, out, _ = run_cli(
        capsys, "simulate", "a -> b", "--inject", "a=m0", "--seed", "3"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "seed: 3"
    assert lines[-1] == "halted after 1 step(s)"


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------


def test_parse_errors_exit_three(capsys):
    code, _, err = run_cli(capsys, "transitions", "a!m0 |")
    assert code == 3
    assert err.startswith("error: ParseError: line 1 col 7")


def test_scope_errors_exit_three(capsys):
    code, _, err = run_cli(capsys, "transitions", "a ? x. x!m0")
    assert code == 3
    assert "error: ScopeError:" in err
    assert "used as a channel" in err


def test_mode_violation_exits_three(capsys):
    code, _, err = run_cli(capsys, "check", "a ? x. 0 | a -> b", "0")
    assert code == 3
    assert "error: ModeViolation:" in err


def test_bad_inject_spec_exits_three(capsys):
    code, _, err = run_cli(capsys, "explore", "a -> b", "--inject", "a")
    assert code == 3
    assert "expected CHANNEL=VALUE" in err


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
