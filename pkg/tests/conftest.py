from __future__ import annotations

import sys

import pytest
from hypothesis import HealthCheck, settings

# Deep terms (numerals up to 500, long traces) need more than the default stack.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


# ---------------------------------------------------------------------------
# One line per acceptance criterion in the terminal summary
# ---------------------------------------------------------------------------

_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def criterion(request):
    """``criterion(k, ok, detail)`` records the outcome of acceptance criterion ``k``."""

    def record(k: int, ok: bool, detail: str) -> None:
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
        request.config.stash[_ACCEPTANCE][k] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
