import os
import pathlib

import pytest

import robustcheck

CORPUS = pathlib.Path(os.environ.get("ROBUSTCHECK_CORPUS", pathlib.Path(__file__).parents[1] / "corpus"))

LEAK = """var u : public untrusted;
var h : secret trusted;
var low : public trusted;
[#]; low := u < h
"""

LOOP = (CORPUS / "knowledge_loop.ifc").read_text()


def test_check_rejects_comparison_with_witness():
    v = robustcheck.check(LEAK, mode="pi", domain=8)
    assert v["status"] == "reject"
    assert "witness" in v


def test_check_accepts_endorsed_comparison():
    src = LEAK.replace("low := u < h", "low := endorse(u < h)")
    assert robustcheck.check(src, property="robustness-endorse", mode="ps", domain=8)["status"] == "accept"


def test_typecheck_reports_rule():
    ds = robustcheck.typecheck(LEAK)
    assert ds and ds[0]["rule"] == "T-ASGMT"
    assert robustcheck.typecheck("var l : public trusted;\nl := 1") == []


def test_lower_renames_checked_endorsement():
    out = robustcheck.lower((CORPUS / "unchecked_guard.ifc").read_text(), 8)
    assert "__chk_" in out and "endorse@" in out


def test_run_trace():
    events = robustcheck.run(LOOP, "h=7", 8)
    assert len(events) == 3


def test_knowledge_loop():
    assert len(robustcheck.knowledge(LOOP, "h=7", 1, "pi", 8)) == 8
    assert len(robustcheck.knowledge(LOOP, "h=7", 1, "pi", 8, progress=True)) == 7
    assert len(robustcheck.knowledge(LOOP, "h=7", 2, "pi", 8)) == 1


def test_errors_are_value_errors():
    with pytest.raises(robustcheck.Error):
        robustcheck.check("var x : public trusted;\nx := ", domain=4)
    with pytest.raises(ValueError):
        robustcheck.check(LEAK, mode="bogus")


def test_execute_matches_cli():
    code, report, _ = robustcheck.execute(["--json", "typecheck", str(CORPUS / "integrity_endorse.ifc")])
    assert code == 0 and report["status"] == "accept"
