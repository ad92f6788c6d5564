"""
Tests for report records, the error hierarchy and the pipeline logger
"""
import os
import sys

import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from semisep.core.errors import (
    DisjointnessError,
    ExitStatus,
    NonTerminationError,
    SceneSyntaxError,
    SemisepError,
    UnsupportedInstanceError,
)
from semisep.core.observability import Logger
from semisep.core.records import (
    BlowupRecord,
    DegreeTrial,
    ObstructionEntry,
    OracleReport,
    Report,
    Verdict,
    WallReport,
)


class TestRecords:
    """Test suite for report dataclasses."""

    def _verdict(self):
        return Verdict(
            generic=True,
            strict=False,
            obstruction={"wall": "y", "kind": "wall", "stage": 2, "parent": None},
            blowup_log=[BlowupRecord(1, "P1", ["0", "0"], "E1", ["B1x", "B1y"])],
            wall_reports=[WallReport("y", "curve", ["P0"], False, True, True, "counter_shadows", True, False, True)],
            obstruction_list=[ObstructionEntry("wall", "y", ["A", "B"], False)],
            nullspace_meets=True,
        )

    def test_blowup_record_to_dict(self):
        record = BlowupRecord(2, "P2", ["0", "0"], "E2", ["B2x", "B2y"], at_infinity=True)
        data = record.to_dict()
        assert data["exceptional"] == "E2"
        assert data["at_infinity"] is True
        assert BlowupRecord.from_dict(data) == record

    def test_verdict_round_trip(self):
        verdict = self._verdict()
        assert Verdict.from_dict(verdict.to_dict()) == verdict

    def test_strict_requires_generic(self):
        with pytest.raises(ValueError):
            Verdict(generic=False, strict=True)

    def test_report_round_trip(self):
        report = Report(
            scene="s",
            mode="full",
            status=1,
            verdict=self._verdict(),
            oracle=OracleReport(3, 4, [DegreeTrial(1, False, 0.0), DegreeTrial(2, True, 0.0)], 2, "x*y", "1/2", False),
        )
        assert Report.from_dict(report.to_dict()) == report


class TestErrors:
    """Test suite for the exception hierarchy."""

    def test_exit_statuses(self):
        assert DisjointnessError("x").exit_status == ExitStatus.INPUT_ERROR
        assert UnsupportedInstanceError("x").exit_status == ExitStatus.UNSUPPORTED
        assert NonTerminationError("x").exit_status == ExitStatus.UNSUPPORTED

    def test_codes_are_distinct(self):
        codes = {cls.code for cls in (SceneSyntaxError, DisjointnessError, UnsupportedInstanceError, NonTerminationError)}
        assert len(codes) == 4

    def test_syntax_error_position(self):
        err = SceneSyntaxError("bad token", line=3, column=7)
        assert err.line == 3 and err.column == 7
        assert "line 3" in err.message
        assert err.to_dict()["code"] == "E_SYNTAX"

    def test_all_errors_share_base(self):
        assert issubclass(NonTerminationError, SemisepError)
        assert issubclass(SceneSyntaxError, SemisepError)


class TestLogger:
    """Test suite for the in-memory pipeline logger."""

    def setup_method(self):
        self.logger = Logger(quiet=True)

    def test_log_and_get(self):
        self.logger.info("Decide", "generic YES", {"wall": "y"})
        logs = self.logger.get_logs()
        assert "Decide: generic YES" in logs
        assert '"wall": "y"' in logs

    def test_last_n(self):
        for i in range(5):
            self.logger.debug("CAD", f"step {i}")
        assert self.logger.get_logs(last_n=2).count("step") == 2

    def test_stats_and_clear(self):
        self.logger.warning("Oracle", "disagreement")
        self.logger.error("Engine", "failed")
        stats = self.logger.get_stats()
        assert stats["total_logs"] == 2
        assert stats["by_level"]["WARNING"] == 1
        self.logger.clear()
        assert self.logger.get_stats()["total_logs"] == 0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
