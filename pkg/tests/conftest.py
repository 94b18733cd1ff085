from __future__ import annotations

import pytest

from greenval.io import load_bundled


@pytest.fixture(scope="session")
def sicily_doc():
    return load_bundled("sicily")


@pytest.fixture(scope="session")
def emilia_doc():
    return load_bundled("emilia-romagna")


@pytest.fixture(scope="session")
def aesthetic_doc():
    return load_bundled("sicily-aesthetic")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(report, "when", "call") == "call":
                name = nodeid.split("::")[-1]
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"[{status}] {name}")
