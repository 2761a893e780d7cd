"""Shared pytest wiring.

The acceptance sweep in test_acceptance.py gets a dedicated summary
block: one line per criterion, PASS or FAIL, taken from the first line
of each test's docstring.  Everything else runs untouched.
"""

import re

_CRITERION = re.compile(r"test_criterion_(\d+)")

# nodeid -> (criterion index, title); filled at collection time
_titles = {}
# criterion index -> (title, verdict)
_verdicts = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        if "test_acceptance" not in item.nodeid:
            continue
        m = _CRITERION.search(item.name)
        if m is None:
            continue
        doc = (getattr(item.function, "__doc__", None) or item.name).strip()
        _titles[item.nodeid] = (int(m.group(1)), doc.splitlines()[0])


def pytest_runtest_logreport(report):
    meta = _titles.get(report.nodeid)
    if meta is None:
        return
    idx, title = meta
    if report.when == "call":
        _verdicts[idx] = (title, "PASS" if report.passed else "FAIL")
    elif report.when == "setup" and not report.passed:
        # fixture errors and skips never reach the call phase
        _verdicts[idx] = (title, "SKIP" if report.skipped else "FAIL")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for idx in sorted(_verdicts):
        title, verdict = _verdicts[idx]
        terminalreporter.write_line(f"criterion {idx:02d} {verdict}  {title}")
