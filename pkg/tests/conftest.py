import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, str] = {}
_outcomes: dict[int, list[bool]] = {}
_item_criterion: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            n, title = mark.args
            _criteria[n] = title
            _item_criterion[item.nodeid] = n


def pytest_runtest_logreport(report):
    n = _item_criterion.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or report.failed:
        _outcomes.setdefault(n, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _outcomes.get(n, [])
        status = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n} ({_criteria[n]}): {status}")
