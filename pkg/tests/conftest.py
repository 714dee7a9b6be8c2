import sys
from pathlib import Path

import pytest

# make the shared helpers in this directory importable as ``_gen``
sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call":
        return
    number, title = marker.args
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    _ACCEPTANCE[number] = (title, rep.passed, rep.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, duration, detail = _ACCEPTANCE[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  ({duration:.1f} s)"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
