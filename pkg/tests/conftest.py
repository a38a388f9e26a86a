import pytest
from gmpy2 import mpq

from pseudoenv.geometry import NEG_INF, POS_INF, Line, Parabola, Point
from pseudoenv.oracle import sweep_envelope
from pseudoenv.envelope_tree import EnvelopeTree


def P(x, y):
    return Point(mpq(x), mpq(y))


def env_tree(*lines):
    return EnvelopeTree.from_segments(sweep_envelope(lines))


@pytest.fixture
def four_lines():
    return [Line("a", 2, 0), Line("b", 1, 1), Line("c", -1, 4), Line("d", -2, 2)]


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
