from __future__ import annotations

import pytest

from chromaguard import validate_polygon

FIXTURES = {
    "SQ4": [(0, 0), (4, 0), (4, 4), (0, 4)],
    "L6": [(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)],
    "H12": [(0, 0), (2, 0), (2, 2), (4, 2), (4, 0), (6, 0), (6, 6), (4, 6), (4, 4), (2, 4),
            (2, 6), (0, 6)],
    "M8": [(0, 0), (6, 0), (6, 4), (4, 4), (4, 2), (2, 2), (2, 4), (0, 4)],
    "PLUS": [(2, 0), (4, 0), (4, 2), (6, 2), (6, 4), (4, 4), (4, 6), (2, 6), (2, 4), (0, 4),
             (0, 2), (2, 2)],
    "STAIR3": [(0, 0), (3, 0), (3, 1), (2, 1), (2, 2), (1, 2), (1, 3), (0, 3)],
    "SPIRAL": [(0, 0), (3, 0), (3, 3), (1, 3), (1, 2), (2, 2), (2, 1), (0, 1)],
    # a y-monotone T whose stem hangs off a v-cut
    "T10": [(0, 0), (2, 0), (2, 2), (6, 2), (6, 4), (4, 4), (4, 6), (2, 6), (2, 4), (0, 4)],
    "TRI": [(0, 0), (6, 0), (2, 5)],
    "ARROW": [(0, 0), (8, 0), (8, 6), (4, 2), (0, 6)],
    "ZIG": [(0, 0), (10, 0), (10, 2), (3, 3), (10, 4), (10, 8), (0, 8), (7, 5), (0, 4)],
}
ORTHO = ["SQ4", "L6", "H12", "M8", "PLUS", "STAIR3", "SPIRAL", "T10"]
GENERAL = ["TRI", "ARROW", "ZIG"]


def D(p):
    """User point to internal (doubled) coordinates."""
    return (2 * p[0], 2 * p[1])


def poly(name):
    return validate_polygon(FIXTURES[name])


@pytest.fixture(params=ORTHO)
def ortho_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
