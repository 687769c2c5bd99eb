import io
from pathlib import Path

import pytest

from maxmult.cli import main
from maxmult.scenario import to_jsonable
from maxmult.session import open_session, run_session

GOLDEN = Path(__file__).parent / "golden"
CMDS = GOLDEN / "session_7_4.cmds"


def test_transcript_matches_golden():
    code, lines = run_session("example_7_4", CMDS.read_text(encoding="utf-8").splitlines(), echo=True)
    assert code == 0
    assert "\n".join(lines) + "\n" == (GOLDEN / "session_7_4.txt").read_text(encoding="utf-8")


def test_commands_file_through_cli():
    out = io.StringIO()
    assert main(["session", "example_7_4", "--commands", str(CMDS), "--echo"], out=out) == 0
    assert out.getvalue() == (GOLDEN / "session_7_4.txt").read_text(encoding="utf-8")


def test_replaying_the_log_reproduces_the_verdict():
    first = open_session("example_7_4")
    for line in ["blowup t,x,y,z t", "blowup t,y,z t"]:
        first.execute(line)
    verdict = first.execute("probe t,y")
    again = open_session("example_7_4")
    outputs = [again.execute(line) for line in first.log]
    assert outputs[-1] == verdict
    assert verdict[-1] == "strong transversality violated at ⟨t2,y2,z2⟩"


def _state(session):
    snap = session.current
    return to_jsonable(snap.base.obj), to_jsonable(snap.ext.obj), snap.steps


def test_undo_restores_the_previous_pair():
    s = open_session("example_7_4")
    start = _state(s)
    s.execute("blowup t,x,y,z t")
    after_one = _state(s)
    s.execute("blowup t,y,z t")
    assert s.execute("undo") == ["back at stage 1"]
    assert _state(s) == after_one
    s.execute("undo")
    assert _state(s) == start


def test_probe_at_stage_zero_is_consistent():
    s = open_session("example_7_4")
    line, summary = s.execute("probe x,y")
    assert line == "⟨x,y⟩: base in stratum, lift ⟨x,y,z⟩ in stratum (consistent)"
    assert "violated" not in summary


def test_errors_do_not_end_the_session():
    code, lines = run_session("example_7_4", ["frobnicate", "undo", "blowup t,x t", "show steps"])
    assert lines[0] == "error: unknown command 'frobnicate'"
    assert lines[1] == "error: nothing to undo"
    assert lines[2].startswith("error:")
    assert lines[-1] == "(no blow-ups)"
    assert code == 3


def test_quit_stops_reading():
    code, lines = run_session("example_7_4", ["quit", "stratum"])
    assert (code, lines) == (0, [])


def test_show_bindings_and_help():
    s = open_session("example_7_4")
    assert s.execute("show base") == s.execute("show")
    assert s.execute("help")[0] == "commands:"
    with pytest.raises(Exception):
        s.execute("show nothing_here")
    assert s.log == ["help"]
