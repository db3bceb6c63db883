"""
Tests for the spt command line.

Tests cover:
- Exit codes of the check command
- State graph output in text, DOT and JSON
- Macro-step traces
- Usage and input errors
"""

import json

import pytest

from app.cli import EXIT_ERROR, build_parser, main


class TestCheckCommand:
    """Test cases for spt check."""

    def test_deadlock_fails(self, corpus_path):
        """The deadlock example is not confluent under weak enabling."""
        assert main(["check", str(corpus_path("deadlock")), "--confluence", "--strategy", "weak"]) == 1

    def test_read_before_write_holds(self, corpus_path, capsys):
        """The read-before-write example is confluent under weak enabling."""
        code = main(["check", str(corpus_path("rbw")), "--confluence", "--strategy", "weak"])
        assert code == 0
        out = capsys.readouterr().out
        assert "✅ confluence: HOLDS" in out
        assert "confluence: HOLDS\n" in out

    def test_quiet_prints_only_the_report(self, spt_file, capsys):
        """--quiet prints the key-value lines and nothing else."""
        path = spt_file("main := s:s.t:t;\n")
        code = main(["check", str(path), "--coherence", "--bound", "50", "--quiet"])
        out = capsys.readouterr().out
        assert code == 0
        assert out == "strategy: admissible\nbound: 50\ncoherence: HOLDS\n"

    def test_all_with_policy(self, corpus_path, capsys):
        """--all includes the policy analyses when a policy exists."""
        main(["check", str(corpus_path("rbw")), "--all", "--quiet"])
        out = capsys.readouterr().out
        for key in ("confluence", "coherence", "conformance", "pivot", "clock_det", "certify"):
            assert f"{key}:" in out, f"Missing {key} in report"
        assert "policy: pi" in out

    def test_no_analysis_selected(self, spt_file, capsys):
        """Checking without an analysis is a usage error."""
        assert main(["check", str(spt_file("main := a;"))]) == EXIT_ERROR
        assert "❌ Error" in capsys.readouterr().err

    def test_policy_analysis_without_policy(self, spt_file):
        """--pivot needs a policy block."""
        assert main(["check", str(spt_file("main := a;")), "--pivot"]) == EXIT_ERROR

    def test_unknown_policy_name(self, corpus_path):
        """Naming a missing policy block is an error."""
        assert main(["check", str(corpus_path("rbw")), "--pivot", "--policy", "nope"]) == EXIT_ERROR


class TestLtsCommand:
    """Test cases for spt lts."""

    def test_text_summary(self, spt_file, capsys):
        """Without output options a summary is printed."""
        assert main(["lts", str(spt_file("main := a | ~a;"))]) == 0
        out = capsys.readouterr().out
        assert "states: 4" in out
        assert "edges: 5" in out

    def test_json_to_stdout(self, spt_file, capsys):
        """--json - writes a JSON document to stdout."""
        assert main(["lts", str(spt_file("main := a | ~a;")), "--json", "-"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["states"][0]["id"] == 0
        assert len(doc["edges"]) == 5

    def test_dot_to_file(self, spt_file, tmp_path):
        """--dot writes a graphviz file."""
        out = tmp_path / "g.dot"
        assert main(["lts", str(spt_file("main := a.b;")), "--dot", str(out)]) == 0
        assert out.read_text(encoding="utf-8").startswith("digraph {")

    def test_bound_hit(self, spt_file):
        """An exhausted state budget exits with 2."""
        path = spt_file("G := a.(b | G);\nmain := G;")
        assert main(["lts", str(path), "--bound", "2"]) == 2

    def test_default_bound_from_settings(self, spt_file, mocker):
        """Without --bound the SPT_BOUND setting applies."""
        settings = mocker.patch("app.cli.get_settings").return_value
        settings.SPT_BOUND = 2
        settings.LOG_LEVEL = "INFO"
        path = spt_file("G := a.(b | G);\nmain := G;")
        assert main(["lts", str(path)]) == 2


class TestTraceCommand:
    """Test cases for spt trace."""

    def test_trace(self, spt_file, capsys):
        """A trace prints the synchronisations and the clock of each step."""
        path = spt_file("clock s;\nmain := ~a.s | a.s;")
        assert main(["trace", str(path), "--steps", "2"]) == 0
        out = capsys.readouterr().out
        assert "syncs: a" in out
        assert "clock: s" in out
        assert "deadlock" in out

    def test_bad_tiebreak(self, spt_file):
        """An unknown tie-break rule is an input error."""
        assert main(["trace", str(spt_file("main := a;")), "--tiebreak", "coin"]) == EXIT_ERROR

    def test_clock_nondeterminism(self, spt_file, capsys):
        """A tick with different successors stops the trace and exits with 1."""
        path = spt_file("clock s;\nmain := s.a + s.b;")
        assert main(["trace", str(path)]) == 1
        out = capsys.readouterr().out
        assert "clock successors: a, b" in out
        assert "clock not deterministic" in out


class TestErrors:
    """Test cases for unreadable or invalid input."""

    def test_syntax_error(self, spt_file, capsys):
        """A syntax error exits with 3 and reports the position."""
        assert main(["lts", str(spt_file("main := a"))]) == EXIT_ERROR
        err = capsys.readouterr().err
        assert "❌ Error" in err
        assert "line 1" in err

    def test_missing_file(self, tmp_path):
        """A missing file exits with 3."""
        assert main(["lts", str(tmp_path / "absent.spt")]) == EXIT_ERROR

    def test_nonpositive_bound(self, spt_file):
        """The state budget must be positive."""
        assert main(["lts", str(spt_file("main := a;")), "--bound", "0"]) == EXIT_ERROR

    def test_bad_strategy(self, spt_file):
        """Usage errors exit with 3, leaving 2 for unknown verdicts."""
        with pytest.raises(SystemExit) as exc:
            main(["lts", str(spt_file("main := a;")), "--strategy", "eager"])
        assert exc.value.code == EXIT_ERROR

    def test_parser_defaults(self):
        """lts and check default to admissible, trace to constructive."""
        parser = build_parser()
        assert parser.parse_args(["lts", "x.spt"]).strategy == "admissible"
        assert parser.parse_args(["check", "x.spt"]).strategy == "admissible"
        assert parser.parse_args(["trace", "x.spt"]).strategy == "constructive"
