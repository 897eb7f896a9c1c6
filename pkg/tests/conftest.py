"""Shared test plumbing: canned providers and fixture paths."""

from __future__ import annotations

from pathlib import Path

import pytest

from convds.gateway import Gateway
from convds.gateway.providers import ProviderResponse

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "convds" / "fixtures"
TABLE9 = FIXTURES / "table9"
FLIGHTS = FIXTURES / "flights"


class QueueProvider:
    """Returns queued replies in order; keeps every bundle it was sent."""

    def __init__(self, *replies: str):
        self.replies = list(replies)
        self.bundles = []

    def send(self, bundle, timeout):
        self.bundles.append(bundle)
        if not self.replies:
            raise AssertionError("QueueProvider ran out of replies")
        return ProviderResponse(text=self.replies.pop(0))


def queue_gateway(*replies: str, **kwargs) -> Gateway:
    return Gateway(QueueProvider(*replies), **kwargs)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One explicit pass/fail line per acceptance criterion."""
    lines = []
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" in nodeid and "::" in nodeid:
                lines.append((nodeid.split("::")[-1], label))
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, label in sorted(lines):
            terminalreporter.write_line(f"{name}: {label}")
