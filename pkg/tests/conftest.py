import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from setpaircut.graph import complete_graph, cycle_graph, path_graph, random_graph

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

K3_TEXT = "3 3\n1 2 1\n2 3 1\n1 3 1\n"


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def seeded_graphs(count, n_range=(3, 8), seed=0):
    rng = np.random.default_rng(seed)
    return [random_graph(int(rng.integers(n_range[0], n_range[1] + 1)), rng) for _ in range(count)]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, ok, text, seconds):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}  [{seconds:.2f} s]"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
