from __future__ import annotations

import pytest

from gl2hecke.field import build_context

SMALL_PRIMES = (3, 5, 7)
ALL_PRIMES = (3, 5, 7, 11, 13, 17, 19)

# filled in by test_acceptance; printed once at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(params=SMALL_PRIMES, ids=lambda p: f"p{p}")
def small_ctx(request):
    return build_context(request.param)


@pytest.fixture(params=ALL_PRIMES, ids=lambda p: f"p{p}")
def ctx(request):
    return build_context(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
