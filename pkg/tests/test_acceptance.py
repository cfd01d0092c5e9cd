"""Acceptance gate: every self-check criterion must pass at its stated tolerance.

Runs the full suite once and asserts each criterion separately so a
failure pinpoints the broken check; the pass/fail line is printed for
the test log.
"""

import pytest

from qcf import verify

CRITERION_NAMES = [name for name, _ in verify.CRITERIA] + ["runtime"]


@pytest.fixture(scope="module")
def report():
    return verify.run_all()


@pytest.mark.parametrize("name", CRITERION_NAMES)
def test_criterion(report, name):
    result = next(r for r in report.results if r.name == name)
    print(result.line())
    assert result.passed, result.line()


def test_report_text_shape(report):
    text = report.text()
    assert text.endswith("overall: PASS\n")
    assert text.count("[PASS]") == len(CRITERION_NAMES)


def test_report_json_round_trip(report):
    obj = report.to_json()
    assert obj["kind"] == "verify"
    assert obj["all_passed"] is True
    assert len(obj["checks"]) == len(CRITERION_NAMES)


def test_filtered_run_skips_runtime_line():
    rep = verify.run_all(filter_str="gauss")
    assert [r.name for r in rep.results] == ["09-gauss-bonnet"]
