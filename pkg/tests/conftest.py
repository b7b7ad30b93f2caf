import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from monoplex.graphs import Graph

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_graph(n, p, rng):
    a = np.triu(rng.random((n, n)) < p, 1)
    return Graph.from_adjacency((a | a.T).astype(np.int8))


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, frozenset(e for e, k in zip(pairs, keep) if k))


@st.composite
def connected_patterns(draw, max_n=5):
    g = draw(graphs(min_n=2, max_n=max_n))
    # attach each vertex to its predecessor chain so the pattern is connected
    extra = {(i, i + 1) for i in range(g.n - 1)} if not g.is_connected() else set()
    return Graph(g.n, g.edges | frozenset(extra))


def binary_fourth_moments(f):
    """Exact E T^4 for c=2 under colorings and under Gaussians (arity 2).

    Both sides are the quadratic form sum_{i<j} a_ij e_i e_j with
    a = (f + f^T) / (n sqrt 2) and e Rademacher or standard normal. The
    Gaussian value follows from cumulants; the Rademacher one differs only
    in the index patterns where a vertex appears four times.
    """
    n = f.n
    a = (f.values + f.values.T) / (n * math.sqrt(2))
    np.fill_diagonal(a, 0.0)
    a2 = a * a
    gauss = (48 * np.trace(np.linalg.matrix_power(a, 4)) + 12 * a2.sum() ** 2) / 16
    deg4 = 8 * np.sum(np.triu(a2, 1) ** 2) + 6 * np.sum(a2.sum(axis=1) ** 2 - (a2 * a2).sum(axis=1))
    return gauss - deg4, gauss


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_criterion():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
