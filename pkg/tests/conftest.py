import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py" in rep.nodeid:
                lines.append((rep.nodeid, outcome))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    import test_acceptance

    for nodeid, outcome in sorted(lines):
        fn = getattr(test_acceptance, nodeid.split("::")[-1], None)
        label = (fn.__doc__ or nodeid).strip().splitlines()[0] if fn else nodeid
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")
