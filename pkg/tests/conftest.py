"""Shared test plumbing: the acceptance suite records one PASS/FAIL line
per criterion; they are echoed in the terminal summary."""

from contextlib import contextmanager

import pytest


def pytest_configure(config):
    config._criterion_lines = []


@pytest.fixture
def criterion(request):
    """Context manager recording a PASS/FAIL checklist line per criterion."""
    lines = request.config._criterion_lines

    @contextmanager
    def _criterion(name):
        try:
            yield
        except Exception:
            lines.append(f"FAIL: {name}")
            raise
        lines.append(f"PASS: {name}")

    return _criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
