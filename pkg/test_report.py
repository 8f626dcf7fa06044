#!/usr/bin/env python3
"""
Test report rendering, schema validation, persistence and the event log.
"""

import io
import json
import sys
import tempfile
from contextlib import redirect_stdout
from pathlib import Path

import jsonschema

sys.path.insert(0, str(Path(__file__).parent))

from kernelwalk import (AnalysisConfig, AnalysisEventLogger, ReportDocument, load_report,
                        parse_model, save_report, validate_report)
from kernelwalk.model import model_to_dict

WALKS = Path(__file__).parent / "walks"


def sample_report() -> ReportDocument:
    model = parse_model((WALKS / "simple.walk").read_text())
    report = ReportDocument(command="classify", config=AnalysisConfig().to_dict(),
                            model=model_to_dict(model))
    report.add_section("kernel", {"degenerate": False, "case": "none"})
    report.add_section("genus", {"classification": "elliptic", "normal": None})
    report.add_section("classification", {
        "verdict": "differentially algebraic",
        "line": "differentially algebraic (finite group, order 4)",
        "evidence": ["degeneracy: none", "genus: elliptic"],
    })
    report.add_caveat("verdict concerns the group at this value of t")
    report.add_caveat("verdict concerns the group at this value of t")
    report.verdict = "differentially algebraic (finite group, order 4)"
    return report


def test_schema_accepts_report():
    report = sample_report()
    validate_report(report.to_dict())
    assert len(report.caveats) == 1


def test_schema_rejects_bad_reports():
    data = sample_report().to_dict()
    data["command"] = "plot"
    try:
        validate_report(data)
        raise AssertionError("ValidationError not raised")
    except jsonschema.ValidationError:
        pass

    data = sample_report().to_dict()
    data["sections"]["classification"]["verdict"] = "maybe"
    try:
        validate_report(data)
        raise AssertionError("ValidationError not raised")
    except jsonschema.ValidationError:
        pass

    try:
        sample_report().add_section("timings", {})
        raise AssertionError("ValueError not raised")
    except ValueError:
        pass


def test_text_rendering():
    text = sample_report().to_text()
    lines = text.splitlines()
    assert lines[0] == "=" * 80
    assert lines[-1] == "verdict: differentially algebraic (finite group, order 4)"
    assert text.index("[kernel]") < text.index("[genus]") < text.index("[classification]")
    assert "  d 1 0 = 1/4" in lines


def test_json_is_deterministic():
    first = sample_report().to_json()
    assert first == sample_report().to_json()
    assert "timestamp" not in first
    assert json.loads(first)["report_version"] == 1


def test_save_and_load():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "reports" / "simple.json"
        assert save_report(sample_report(), str(path))
        loaded = load_report(str(path))
        assert loaded is not None
        assert loaded.to_dict() == sample_report().to_dict()
        assert load_report(str(Path(tmp) / "missing.json")) is None


def test_unknown_version_warns():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "old.json"
        path.write_text(json.dumps({"version": "0", "report": sample_report().to_dict()}))
        out = io.StringIO()
        with redirect_stdout(out):
            loaded = load_report(str(path))
        assert loaded is not None
        assert out.getvalue().startswith("WARNING: Unknown report file version: 0")

        path.write_text("{not json")
        with redirect_stdout(io.StringIO()):
            assert load_report(str(path)) is None


def test_event_log():
    with tempfile.TemporaryDirectory() as tmp:
        events = AnalysisEventLogger(str(Path(tmp) / "logs" / "events.jsonl"))
        events.stage_started("curve")
        events.numeric_check("curve", "invariant_mismatch", 1e-20, 1e-8)
        events.stage_failed("group", RuntimeError("boom"))
        recent = events.get_recent_events()
        assert [e["event_type"] for e in recent] == ["stage_started", "numeric_check", "stage_failed"]
        assert recent[1]["metadata"]["passed"] is True
        assert recent[2]["metadata"]["error_type"] == "RuntimeError"
        assert len(events.get_recent_events(limit=1)) == 1
        events.purge_logs()
        assert events.get_recent_events() == []

    inert = AnalysisEventLogger()
    inert.stage_started("series")
    assert inert.get_recent_events() == []


if __name__ == "__main__":
    tests = [
        test_schema_accepts_report,
        test_schema_rejects_bad_reports,
        test_text_rendering,
        test_json_is_deterministic,
        test_save_and_load,
        test_unknown_version_warns,
        test_event_log,
    ]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except AssertionError as e:
            print(f"❌ {test.__name__}: {e}")
            failed += 1
    sys.exit(0 if failed == 0 else 1)
