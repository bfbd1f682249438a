import re

import pytest

_AC_RESULTS = {}
_AC_NAME = re.compile(r"test_ac(\d+)_")


def pytest_runtest_logreport(report):
    m = _AC_NAME.search(report.nodeid)
    if not m or not report.nodeid.startswith("tests/test_acceptance.py"):
        return
    n = int(m.group(1))
    failed = report.failed
    if report.when == "call" or failed:
        prev = _AC_RESULTS.get(n, ("PASS", ""))
        status = "FAIL" if failed or prev[0] == "FAIL" else "PASS"
        msg = prev[1]
        if failed and not msg:
            msg = str(report.longrepr.reprcrash.message).splitlines()[0] if hasattr(report.longrepr, "reprcrash") else ""
        _AC_RESULTS[n] = (status, msg)


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_AC_RESULTS):
        status, msg = _AC_RESULTS[n]
        line = f"AC{n}: {status}"
        if status == "FAIL" and msg:
            line += f"  ({msg[:160]})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def rng():
    import numpy as np

    return np.random.default_rng(20240601)
