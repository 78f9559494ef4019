import pytest

from ehtour.core import Tournament
from ehtour.recognize import recognize_under

# backward edges listed 1-based as (earlier, later)
NEBULA17_EDGES = [(2, 3), (2, 5), (3, 6), (4, 11), (12, 16), (4, 16), (1, 7), (1, 8),
              (9, 13), (9, 14), (9, 15), (10, 17)]


def nebula17_example():
    t = Tournament.from_backward_arcs(17, [(b - 1, a - 1) for a, b in NEBULA17_EDGES])
    w = recognize_under(t, range(17), "regular-super-nebula", center_choice="left")
    return t, w


def key_example_inputs():
    n_t = Tournament.from_backward_arcs(10, [(1, 0), (6, 0), (7, 0), (5, 2), (4, 2), (5, 3), (9, 8)])
    g_t = Tournament.from_backward_arcs(7, [(2, 1), (4, 1), (4, 2), (3, 0), (6, 5)])
    n_w = recognize_under(n_t, range(10), "regular-super-nebula")
    g_w = recognize_under(g_t, range(7), "regular-delta-galaxy")
    return n_t, n_w, g_t, g_w


@pytest.fixture
def nebula17():
    return nebula17_example()


@pytest.fixture
def key_inputs():
    return key_example_inputs()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
