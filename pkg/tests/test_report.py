"""
Tests for machine and human report renderings (semisep/tools/report.py)
"""
import json
import os
import sys

import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from semisep.core.records import (
    BlowupRecord,
    DegreeTrial,
    ObstructionEntry,
    OracleReport,
    Report,
    Verdict,
    WallReport,
)
from semisep.tools.report import SCHEMA_VERSION, from_json, status_text, summary, to_json


def make_report():
    verdict = Verdict(
        generic=True,
        strict=False,
        obstruction={"wall": "y", "kind": "wall", "stage": 2, "parent": None},
        blowup_log=[BlowupRecord(1, "P1", ["0", "0"], "E1", ["B1x", "B1y"])],
        wall_reports=[WallReport("y", "curve", ["P0", "P1"], False, True, True, "counter_shadows", odd=True, even=False)],
        obstruction_list=[ObstructionEntry("wall", "y", ["A", "B"], False)],
        nullspace_meets=True,
    )
    oracle = OracleReport(
        samples_a=12,
        samples_b=9,
        trials=[DegreeTrial(1, False, 0.25), DegreeTrial(2, True, 0.5)],
        first_feasible=2,
        certificate="x**2 - y",
        margin="1/8",
        agreement=False,
    )
    return Report("segment_split", "full", 1, verdict, oracle, timing={"decide": 1.5, "total": 2.0})


class TestMachineReport:
    """Deterministic JSON."""

    def test_schema_and_sorted_keys(self):
        text = to_json(make_report())
        data = json.loads(text)
        assert data["schema"] == SCHEMA_VERSION
        assert text == json.dumps(data, sort_keys=True, indent=2) + "\n"

    def test_timings_are_stripped(self):
        data = json.loads(to_json(make_report()))
        assert "timing" not in data
        assert all("seconds" not in t for t in data["oracle"]["trials"])

    def test_identical_bytes_for_identical_results(self):
        other = make_report()
        other.timing = {"total": 99.0}
        other.oracle.trials[0].seconds = 7.0
        assert to_json(make_report()) == to_json(other)

    def test_round_trip(self):
        report = make_report()
        again = from_json(to_json(report))
        assert again.verdict == report.verdict
        assert again.oracle.certificate == report.oracle.certificate
        assert [t.feasible for t in again.oracle.trials] == [False, True]
        assert again.timing == {}

    def test_error_report(self):
        report = Report("broken", "full", 4, error={"code": "E_SYNTAX", "message": "bad"})
        data = json.loads(to_json(report))
        assert data["verdict"] is None and data["error"]["code"] == "E_SYNTAX"


class TestSummary:
    """Human-readable text."""

    def test_status_text(self):
        assert status_text(0) == "separable"
        assert status_text(1) == "generically separable only"
        assert status_text(4) == "input error"

    def test_summary_lines(self):
        text = summary(make_report())
        assert text.splitlines()[0] == "scene segment_split [full]: generically separable only (exit 1)"
        assert "generic: YES   strict: NO" in text
        assert "blow-up E1 of P1 at (0, 0)" in text
        assert "counter_shadows" in text
        assert "certificate: x**2 - y (margin 1/8)" in text
        assert "timing:" in text

    def test_error_summary(self):
        report = Report("broken", "generic", 4, error={"code": "E_SYNTAX", "message": "bad"})
        assert "error E_SYNTAX: bad" in summary(report)

    def test_quick_accept_line(self):
        report = Report("apart", "generic", 1, Verdict(generic=True, strict=None, quick_accept=True))
        text = summary(report)
        assert "strict: -" in text
        assert "closures are disjoint" in text


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
