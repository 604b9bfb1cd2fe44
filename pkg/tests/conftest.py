import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# outcome of each acceptance criterion, keyed by node id
_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    entry = _CRITERIA.setdefault(report.nodeid, {"props": props, "ok": True})
    entry["props"].update(props)
    if report.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    rows = sorted(_CRITERIA.values(), key=lambda e: e["props"]["criterion"])
    for e in rows:
        p = e["props"]
        status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {p['criterion']:>2}: {p['title']} | {p.get('detail', '')}")
    passed = sum(e["ok"] for e in rows)
    terminalreporter.write_line(f"{passed}/{len(rows)} criteria passed")
