import pytest

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = ""
        if report.failed:
            detail = str(call.excinfo.value).splitlines()[0] if call.excinfo else ""
        _outcomes.setdefault(label, []).append((report.passed, item.name, detail))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_outcomes, key=_sort_key):
        results = _outcomes[label]
        ok = all(r[0] for r in results)
        names = ", ".join(sorted({r[1].split("[")[0] for r in results}))
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  ({names})"
        details = [r[2] for r in results if r[2]]
        if details:
            line += f"  {details[0]}"
        terminalreporter.write_line(line)


def _sort_key(label):
    head = "".join(ch for ch in label if ch.isdigit())
    return (int(head), label)
