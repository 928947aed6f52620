import numpy as np
import pytest

from radialpsh import DivisorPower, Exp, PowerAlpha, SoftplusKink, Tabulated, TranslatedScaled
from radialpsh.grid import GridFunction


def convex_table():
    ts = np.linspace(-60.0, 0.0, 121)
    return Tabulated(GridFunction(ts, np.expm1(0.5 * ts) + 0.1 * ts))


def all_families():
    """One representative per weight family (and a few parameters)."""
    return [PowerAlpha(0.3), PowerAlpha(0.45), PowerAlpha(0.6), DivisorPower(0.5), Exp(),
            SoftplusKink(), TranslatedScaled(SoftplusKink(), 0.25, 16.0), Tabulated.identity(),
            convex_table()]


@pytest.fixture(params=all_families(), ids=lambda w: w.spec())
def family(request):
    return request.param


def pytest_configure(config):
    config._criterion_lines = {}


@pytest.fixture
def criterion(request):
    """Record (and print) one pass/fail line for an acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config._criterion_lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config._criterion_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
