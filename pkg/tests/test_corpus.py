"""
Tests for the packaged corpus of worked examples.

Tests cover:
- Every fixture parses and has expectations
- Every fixture reproduces its expected verdicts
- Expectation file handling
"""

import pytest

from app.exceptions import ArgumentError
from app.schemas.report import CheckReport, Fixture
from app.services.corpus import _read_expect, fixture_names, fixtures, load_fixture, mismatches, run_fixture
from app.services.parser import parse


class TestCorpusFiles:
    """Test cases for loading fixtures."""

    def test_names_sorted(self):
        """Fixture names are listed in order and include the core examples."""
        names = fixture_names()
        assert names == sorted(names)
        required_names = (
            "abro", "abro_single", "deadlock", "multicast", "rbw", "signal_guarded", "three_senders", "two_thread",
        )
        for required in required_names:
            assert required in names, f"Missing fixture {required}"

    def test_every_fixture_parses(self):
        """Every source parses and every fixture expects something."""
        for fixture in fixtures():
            spt = parse(fixture.source)
            assert spt.main is not None
            assert fixture.expected, f"{fixture.name} has no expectations"
            assert fixture.provenance, f"{fixture.name} has no provenance"

    def test_unknown_fixture(self):
        """Loading a missing fixture raises ArgumentError."""
        with pytest.raises(ArgumentError):
            load_fixture("no_such_example")

    def test_malformed_expect_line(self, tmp_path):
        """Lines without a colon are rejected with their line number."""
        path = tmp_path / "bad.expect"
        path.write_text("# comment\nconfluence HOLDS\n", encoding="utf-8")
        with pytest.raises(ArgumentError, match="bad.expect:2"):
            _read_expect(path)

    def test_expect_without_source(self, tmp_path):
        """A fixture without an expectation file has empty expectations."""
        (tmp_path / "solo.spt").write_text("main := a;\n", encoding="utf-8")
        fixture = load_fixture("solo", tmp_path)
        assert fixture.expected == {}
        assert fixture.policy is None


class TestMismatches:
    """Test cases for comparing reports against expectations."""

    def test_reports_deviation(self):
        """A differing entry is reported with both values."""
        fixture = Fixture(name="x", source="main := a;", expected={"confluence": "FAILS"})
        report = run_fixture(fixture)
        found = mismatches(fixture, report)
        assert found == ["x: confluence expected FAILS, got HOLDS"]

    def test_missing_entry(self):
        """An expected analysis missing from the report is a deviation."""
        fixture = Fixture(name="x", source="main := a;", expected={"coherence": "HOLDS"})
        found = mismatches(fixture, CheckReport(source="x", strategy="admissible", bound=10))
        assert found == ["x: coherence expected HOLDS, got None"]


@pytest.mark.integration
class TestCorpusVerdicts:
    """Every worked example reproduces its recorded verdicts."""

    @pytest.mark.parametrize("name", fixture_names())
    def test_fixture(self, name):
        """The report agrees with the expectation file."""
        fixture = load_fixture(name)
        report = run_fixture(fixture)
        assert mismatches(fixture, report) == []


class TestCorpusRunner:
    """Test cases for the batch runner script."""

    def test_matching_fixture(self):
        """A fixture that matches reports no problems."""
        from app.scripts.run_corpus import run

        assert run(["coherent_pair"]) == []

    def test_missing_fixture(self):
        """A missing fixture is reported instead of aborting the batch."""
        from app.scripts.run_corpus import run

        problems = run(["no_such_example", "coherent_pair"])
        assert len(problems) == 1
        assert problems[0].startswith("no_such_example: error:")
