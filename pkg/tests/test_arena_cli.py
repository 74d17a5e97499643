import json

import pytest

from elusive.arena import (
    ALL_INVARIANTS_HELD,
    ERROR,
    SEEKER_TRAP,
    VIOLATION,
    MatchConfig,
    interactive_play,
    make_hider,
    make_seeker,
    replay,
    run_match,
)
from elusive.board import GREEN, RED, Transcript
from elusive.cli import main
from elusive.errors import MalformedTranscript
from elusive.hider import ConnectedHider
from elusive.properties import CONNECTED, NO_ISOLATED
from elusive.seeker import OneWhiteSeeker, RandomSeeker, ScriptSeeker


# -- run_match ---------------------------------------------------------------------


def test_random_vs_connected_holds():
    r = run_match(RandomSeeker(42), make_hider("connected"), MatchConfig(turns=2000))
    assert r.verdict == {"kind": ALL_INVARIANTS_HELD}
    assert r.checks_run > 2000 and len(r.statuses) == 2000


def test_one_white_never_played():
    r = run_match(OneWhiteSeeker((0, 1)), make_hider("k-cycle:3"), MatchConfig(turns=500))
    assert r.ok
    assert all(e != (0, 1) for _, e, _ in r.transcript.moves)
    assert len(r.transcript.moves) == 500


def test_bipartite_first_move_green():
    r = run_match(ScriptSeeker([(0, 1)]), make_hider("bipartite"), MatchConfig(turns=1))
    assert r.transcript.moves[0][2] is GREEN


class LyingHider(ConnectedHider):
    """Monitors of the connected strategy, but answers red to everything."""

    def respond(self, b, e):
        return RED


def test_violation_is_reported_and_replays():
    r = run_match(ScriptSeeker([(0, 1), (0, 2)]), LyingHider(), MatchConfig(turns=50))
    assert not r.ok and r.verdict["kind"] == VIOLATION and r.verdict["turn"] == 0
    again = run_match(ScriptSeeker([(0, 1), (0, 2)]), LyingHider(), MatchConfig(turns=50))
    assert again.verdict == r.verdict
    # the registered strategy disagrees with the recorded replies
    _, checked = replay(Transcript.from_json(r.transcript.to_json()))
    assert not checked.ok


def test_window_cap_recorded_not_raised():
    r = run_match(RandomSeeker(0), make_hider("connected"), MatchConfig(turns=200, window_cap=8))
    assert r.verdict["kind"] == ERROR and "WindowCapExceeded" in r.error


def test_match_config_rejects_zero_turns():
    with pytest.raises(ValueError):
        MatchConfig(turns=0)


@pytest.mark.parametrize("hid", ["connected", "bipartite", "degree:3", "diameter:2", "k-cycle:4"])
def test_determinism_and_monitor_independence(hid):
    cfg = MatchConfig(turns=300, seed=5)
    a = run_match(make_seeker("random", seed=5), make_hider(hid), cfg).transcript.to_json()
    b = run_match(make_seeker("random", seed=5), make_hider(hid), cfg).transcript.to_json()
    quiet = MatchConfig(turns=300, seed=5, monitors="none")
    c = run_match(make_seeker("random", seed=5), make_hider(hid), quiet).transcript.to_json()
    assert a == b == c


def test_monitor_subset():
    cfg = MatchConfig(turns=50, monitors=["green graph"])
    r = run_match(RandomSeeker(3), make_hider("connected"), cfg)
    full = run_match(RandomSeeker(3), make_hider("connected"), MatchConfig(turns=50))
    assert r.ok and r.checks_run < full.checks_run


def test_registry_errors():
    for bad in ("nope", "k-cycle:x", "degree"):
        with pytest.raises(ValueError):
            make_hider(bad)
    with pytest.raises(ValueError):
        make_seeker("indep:z")


# -- replay ------------------------------------------------------------------------------


@pytest.mark.parametrize("sid, hid", [("random:7", "bipartite"), ("no-isolated", "isolated-compliant:2"), ("indep:2", "indep-compliant:2")])
def test_replay_round_trip(sid, hid):
    r = run_match(make_seeker(sid), make_hider(hid), MatchConfig(turns=400))
    t = Transcript.from_json(r.transcript.to_json())
    board, again = replay(t)
    assert board == r.transcript.replay()
    assert again.verdict == r.verdict


def test_replay_detects_edited_reply():
    r = run_match(RandomSeeker(2), make_hider("connected"), MatchConfig(turns=30))
    d = json.loads(r.transcript.to_json())
    d["moves"][0]["c"] = "red" if d["moves"][0]["c"] == "green" else "green"
    _, again = replay(Transcript.from_json(json.dumps(d)))
    assert again.verdict["kind"] == VIOLATION and again.verdict["turn"] == 0
    assert again.verdict["check"] == "board follows the strategy"


def test_replay_duplicate_edge_and_empty():
    d = {"window_cap": 4096, "moves": [{"t": 0, "e": [0, 1], "c": "green"}, {"t": 1, "e": [0, 1], "c": "red"}], "final_window": 2}
    with pytest.raises(MalformedTranscript):
        replay(Transcript.from_json(json.dumps(d)))
    board, res = replay(Transcript(4096))
    assert board.turn == 0 and res is None


# -- interactive ----------------------------------------------------------------------------


def scripted(lines):
    it = iter(lines)
    return lambda prompt: next(it, "q")


def test_interactive_seeker_side():
    out = []
    b = interactive_play(CONNECTED, "seeker", "connected", input_fn=scripted(["0 1"]), output_fn=out.append)
    assert b.turn == 1 and b.color_of((0, 1)) is GREEN
    assert "0-1: green" in out


def test_interactive_rejects_loop_and_colored_edge():
    out = []
    b = interactive_play(CONNECTED, "seeker", "connected", input_fn=scripted(["0 0", "0 1", "1 0", "x y"]), output_fn=out.append)
    assert b.turn == 1
    assert sum(line.startswith("rejected") for line in out) == 3


def test_interactive_hider_side_retries_same_edge():
    out = []
    b = interactive_play(NO_ISOLATED, "hider", "no-isolated", input_fn=scripted(["maybe", "g", "r"]), output_fn=out.append)
    assert b.history[0] == ((0, 1), GREEN) and b.turn == 2
    assert any(line.startswith("rejected") for line in out)


# -- CLI -----------------------------------------------------------------------------------


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_cli_simulate_and_replay(capsys, tmp_path):
    path = tmp_path / "t.json"
    code, out = run_cli(capsys, "simulate", "--hider", "connected", "--seeker", "random", "--turns", "200", "--seed", "4", "--transcript", str(path))
    assert code == 0 and out["verdict"]["kind"] == ALL_INVARIANTS_HELD
    code, out = run_cli(capsys, "replay", str(path))
    assert code == 0 and out["turns"] == 200 and out["match"]["verdict"]["kind"] == ALL_INVARIANTS_HELD


def test_cli_simulate_seeker_trap(capsys):
    code, out = run_cli(capsys, "simulate", "--hider", "indep-compliant:2", "--seeker", "indep:2", "--turns", "500")
    assert code == 0 and out["verdict"]["kind"] in (SEEKER_TRAP, "seeker_decided")


@pytest.mark.parametrize("g", ["g0", "g1", "g2"])
def test_cli_solve(capsys, g):
    code, out = run_cli(capsys, "solve", "--subgame", g, "--verify")
    assert code == 0 and out["winner"] == "hider" and out["policy_check"]["passed"]
    assert isinstance(out["positions_explored"], int)


def test_cli_verify_appendix(capsys):
    code, out = run_cli(capsys, "verify-appendix")
    assert code == 0 and out["passed"] and "counterexample" not in out


def test_cli_classical(capsys):
    code, out = run_cli(capsys, "classical", "--property", "nonempty", "--n", "3")
    assert code == 0 and out["verdict"] == "Elusive"
    code, _ = run_cli(capsys, "classical", "--property", "connected", "--n", "7")
    assert code == 2


def test_cli_s0(capsys, tmp_path):
    code, out = run_cli(capsys, "s0", "rigidity", "--m", "10", "--flip", "x0x1")
    assert code == 0 and out["verdict"] == "NonIsomorphic"
    code, out = run_cli(capsys, "s0", "reduce", "--bits", "1011", "--graph")
    assert code == 0 and out["parity"] == 1 and out["check"]["passed"]
    path = tmp_path / "g.json"
    path.write_text(json.dumps(out["graph"]))
    code, out = run_cli(capsys, "s0", "check", "--input", str(path), "--threshold", "0")
    assert code == 0 and out["verdict"] == "consistent-with-S0 at horizon m"
    code, out = run_cli(capsys, "s0", "reduce", "--bits", "1001")
    assert code == 0 and not out["check"]["passed"]


def test_cli_usage_errors(capsys):
    assert run_cli(capsys, "simulate", "--hider", "bogus", "--seeker", "random")[0] == 2
    assert run_cli(capsys, "nonsense")[0] == 2
    assert run_cli(capsys, "s0", "rigidity", "--flip", "x0a")[0] == 2
    assert run_cli(capsys, "replay", "/nonexistent/file.json")[0] == 2


def test_cli_violation_exit_code(capsys, tmp_path):
    d = {"window_cap": 4096, "moves": [{"t": 0, "e": [0, 1], "c": "red"}], "final_window": 2, "meta": {"hider": "connected", "seeker": "script"}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, out = run_cli(capsys, "replay", str(path))
    assert code == 1 and out["match"]["verdict"]["kind"] == VIOLATION
