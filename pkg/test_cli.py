#!/usr/bin/env python3
"""
Test the command-line driver end to end on the shipped models.
"""

import io
import json
import sys
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import mock

sys.path.insert(0, str(Path(__file__).parent))

from kernelwalk import NumericError, load_report, validate_report
from kernelwalk.cli import run

WALKS = Path(__file__).parent / "walks"


def invoke(*argv: str):
    """run() with captured output; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue(), err.getvalue()


def walk(name: str) -> str:
    return str(WALKS / name)


def test_classify_simple_walk():
    code, out, _ = invoke("classify", walk("simple.walk"))
    assert code == 0
    assert out.strip().splitlines()[-1] == "verdict: differentially algebraic (finite group, order 4)"


def test_classify_non_elliptic_models():
    code, out, _ = invoke("classify", walk("family1.walk"))
    assert code == 0
    assert out.strip().endswith("verdict: differentially transcendental (genus 0, family 1)")
    code, out, _ = invoke("classify", walk("origin.walk"), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"].startswith("algebraic (degenerate, ")
    assert data["sections"]["classification"]["closed_form"] == "1/(1 - t)"


def test_curve_command():
    code, out, err = invoke("curve", walk("simple.walk"), "--json")
    assert code == 0, err
    data = json.loads(out)
    validate_report(data)
    contour = data["sections"]["curve"]["branch_points"]["contour"]
    assert contour.startswith("a4 -> ")
    assert contour in data["caveats"]
    assert data["sections"]["curve"]["branch_points"]["error_radius"] > 0


def test_series_json():
    code, out, _ = invoke("series", walk("origin.walk"), "--max-steps", "4", "--check-feq", "4", "--json")
    assert code == 0
    data = json.loads(out)
    validate_report(data)
    assert data["command"] == "series"
    assert data["sections"]["series"]["excursions"] == ["1"] * 5
    assert data["sections"]["series"]["functional_equation"]["holds"] is True
    assert data["verdict"] is None


def test_group_tandem():
    code, out, _ = invoke("group", walk("tandem.walk"), "--json", "--max-denominator", "50")
    assert code == 0
    data = json.loads(out)
    group = data["sections"]["group"]
    assert group["verdict"] == "finite"
    assert group["ell"] == 3
    assert group["bound_checked"] == 50
    assert data["config"]["max_denominator"] == 50


def test_input_errors_exit_1():
    code, _, err = invoke("classify", walk("does-not-exist.walk"))
    assert code == 1
    assert err.startswith("ERROR: cannot read")

    with tempfile.TemporaryDirectory() as tmp:
        bad = Path(tmp) / "bad.walk"
        bad.write_text("d 0 1 = 1/2\nd 0 1 = 1/2\nt = 1/2\n")
        code, _, err = invoke("kernel", str(bad))
        assert code == 1
        assert err.startswith("ERROR: model: ")

    code, _, err = invoke("curve", walk("family1.walk"))
    assert code == 1
    assert "not elliptic" in err

    code, _, _ = invoke("series", walk("simple.walk"))
    assert code == 1

    code, _, err = invoke("continue", walk("simple.walk"), "--truncation", "5")
    assert code == 1
    assert err.startswith("ERROR: config: ")


def test_numeric_failure_exit_2():
    failure = NumericError("group", "orbit drifted off the curve at step 7")
    with mock.patch("kernelwalk.cli.group_report", side_effect=failure):
        code, out, err = invoke("group", walk("simple.walk"))
    assert code == 2
    assert out == ""
    assert err.strip() == "ERROR: group: orbit drifted off the curve at step 7"


def test_analyze_is_deterministic():
    with tempfile.TemporaryDirectory() as tmp:
        target = Path(tmp) / "simple.json"
        log = Path(tmp) / "events.jsonl"
        args = ("analyze", walk("simple.walk"), "--json", "--samples", "10", "--max-steps", "6")
        code, first, _ = invoke(*args, "--output", str(target), "--log-events", str(log))
        assert code == 0
        code, second, _ = invoke(*args)
        assert code == 0
        assert first == second

        data = json.loads(first)
        assert set(data["sections"]) == {"series", "kernel", "genus", "curve", "group",
                                         "continuation", "classification"}
        assert data["sections"]["continuation"]["identity_max"] < 1e-6
        assert load_report(str(target)).to_dict() == data
        assert log.read_text().count("stage_completed") >= 6


if __name__ == "__main__":
    tests = [
        test_classify_simple_walk,
        test_classify_non_elliptic_models,
        test_curve_command,
        test_series_json,
        test_group_tandem,
        test_input_errors_exit_1,
        test_numeric_failure_exit_2,
        test_analyze_is_deterministic,
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
