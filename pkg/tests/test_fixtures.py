import pytest

from matbispec.fixtures import CASE_NAMES, run_fixture, run_fixtures


@pytest.mark.parametrize("name", CASE_NAMES)
def test_fixture_case_passes(name):
    report = run_fixture(name)
    failed = [c.to_json() for c in report.checks if not c.passed]
    assert report.passed, failed


def test_n3_is_report_mode_and_localizes():
    report = run_fixture("n3")
    assert report.discrepancy_allowed
    findings = {f.name: f for f in report.findings}
    shown = findings["n3[as_displayed]:display_vs_recursion"]
    constrained = findings["n3[V111=0]:display_vs_recursion"]
    assert not shown.passed and shown.first_discrepancy[0] == "V_2[1,1]"
    assert not constrained.passed and constrained.first_discrepancy[0] == "V_3[1,3]"


def test_run_order_is_stable():
    names = ["scalar_tanh", "n1", "residue_full"]
    assert [r.name for r in run_fixtures(names)] == names


def test_unknown_case():
    with pytest.raises(KeyError):
        run_fixture("n9")
