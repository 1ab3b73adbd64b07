import numpy as np
import pytest

from dtwave.filters import DualTreeFilterSet, load_fixture, load_fixture_set

_SUMMARY = []


def record_verdict(line):
    """Queue a one-line verdict for the end-of-run terminal summary."""
    _SUMMARY.append(line)


def pytest_terminal_summary(terminalreporter):
    if not _SUMMARY:
        return
    terminalreporter.write_sep("-", "acceptance verdicts")
    for line in _SUMMARY:
        terminalreporter.write_line(line)


def fixture_filter_set(name):
    """Load a two-filter fixture pair, or wrap a single-filter fixture."""
    try:
        return load_fixture_set(name)
    except OSError:
        h = load_fixture(name)
        return DualTreeFilterSet(h1=h, h1_first=h)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
