from collections import OrderedDict

# criterion number -> list of (check name, passed, detail)
ACCEPTANCE: "OrderedDict[int, list]" = OrderedDict()


def record(criterion: int, name: str, passed: bool, detail: str = ""):
    ACCEPTANCE.setdefault(criterion, []).append((name, bool(passed), detail))
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[criterion]
        ok = all(p for _, p, _ in checks)
        failed = [n for n, p, _ in checks if not p]
        tail = "" if ok else f" (failed: {', '.join(failed)})"
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}{tail}")
        for name, passed, detail in checks:
            tr.write_line(f"    {'ok  ' if passed else 'FAIL'} {name}: {detail}")
