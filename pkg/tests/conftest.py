import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE: dict[str, tuple[str, str]] = {}
_OUTCOME: dict[str, str] = {}


def pytest_collection_finish(session):
    for item in session.items:
        if item.module.__name__.endswith("test_acceptance") and item.name.startswith("test_criterion_"):
            doc = (item.function.__doc__ or "").strip().splitlines()
            _ACCEPTANCE[item.nodeid] = (item.name, doc[0] if doc else item.name)


def pytest_runtest_logreport(report):
    if report.nodeid not in _ACCEPTANCE:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _OUTCOME.get(report.nodeid)
        if prev in (None, "passed"):
            _OUTCOME[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    # parametrized criteria pass only if every case passes
    grouped: dict[int, tuple[str, bool]] = {}
    for nodeid, (name, desc) in _ACCEPTANCE.items():
        number = int(name.split("_")[2])
        ok = _OUTCOME.get(nodeid) == "passed"
        prev = grouped.get(number, (desc, True))
        grouped[number] = (desc, prev[1] and ok)
    for number, (desc, ok) in sorted(grouped.items()):
        tag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{tag} criterion {number:2d}: {desc}")
