import math

import pytest

from ballcover.geometry import Configuration, Region


def square(x0=0.0, y0=0.0, s=1.0):
    return [(x0, y0), (x0 + s, y0), (x0 + s, y0 + s), (x0, y0 + s)]


@pytest.fixture
def unit_square():
    return Region.from_polygons([square()])


@pytest.fixture
def two_squares():
    return Region.from_polygons([square(), square(1.0, 0.0)])


@pytest.fixture
def corner_pair():
    """A = [0,3]^2 with balls at (0,3) and (1.2,1.7), r = 1."""
    region = Region.from_polygons([square(s=3.0)])
    cfg = Configuration(((0.0, 3.0), (1.2, 1.7)), 1.0)
    return region, cfg


CORNER_PAIR_COVERED = 3.781718647855564


def corner_pair_covered_closed_form():
    d = math.hypot(1.2, 1.3)
    return 5 * math.pi / 4 - 2 * math.acos(d / 2) + d * math.sqrt(1 - (d / 2) ** 2)


_RECORDS = []


def record(line):
    """Print a result line now and repeat it in the terminal summary."""
    print(line)
    _RECORDS.append(line)


def pytest_terminal_summary(terminalreporter):
    if _RECORDS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_RECORDS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
