import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion, printed at the end."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc, ok in sorted(RESULTS):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {num:2d}: {desc}")
