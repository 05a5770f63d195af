import os
import sys

import hypothesis

sys.path.insert(0, os.path.dirname(__file__))

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=400, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

import pytest

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance_line(request):
    """Record one pass/fail line; printed immediately and again in the terminal summary."""
    def record(number, ok, detail):
        line = f"ACCEPTANCE {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.stash[_ACCEPTANCE].append((number, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = sorted(config.stash.get(_ACCEPTANCE, []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in lines:
            terminalreporter.write_line(line)
