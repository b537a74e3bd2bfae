import warnings

import numpy as np
import pytest

from dgw import build_frame, build_knn_graph, random_geometric_graph, scale_grid
from dgw.graph_core import Graph


def path_graph(n, w=1.0):
    a = np.zeros((n, n))
    for i in range(n - 1):
        a[i, i + 1] = a[i + 1, i] = w
    return Graph(a)


def complete_graph(n):
    return Graph(np.ones((n, n)) - np.eye(n))


def rgg_graph(n, seed, k=5):
    return build_knn_graph(random_geometric_graph(n, seed=seed), min(k, n - 1))


def small_frame(n=6, T=8, S=3, beta=1.0, seed=0):
    g = rgg_graph(n, seed, k=2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_frame(g.basis, T, scale_grid(S, 2.0, g.basis.lambda_max), beta)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def frame_6x8():
    return small_frame()


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""

    def _report(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
