import json

import pytest

from inbox.convexset import ball, box, from_polygon, regular_polygon


@pytest.fixture
def square():
    return from_polygon([[0, 0], [1, 0], [1, 1], [0, 1]])


@pytest.fixture
def square_halfspaces():
    return box([0, 0], [1, 1])


@pytest.fixture
def triangle():
    return from_polygon([[0, 0], [1, 0], [0, 1]])


@pytest.fixture
def disk():
    return ball(2)


@pytest.fixture
def hexagon():
    return regular_polygon(6)


@pytest.fixture
def write_json(tmp_path):
    def _write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return _write



ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the acceptance summary and print it."""

    def _record(label, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
