import os

import numpy as np
import pytest

from spreadlab import logging_setup
from spreadlab.compat import ENV_LOG_DIR, ENV_THREADS
from spreadlab.graph import WeightedGraph
from spreadlab.sampling import Snapshot, SnapshotSet


@pytest.fixture(scope="session", autouse=True)
def _log_dir(tmp_path_factory):
    # Keep spreadlab.log out of the package directory during test runs.
    log_dir = tmp_path_factory.mktemp("logs")
    os.environ[ENV_LOG_DIR] = str(log_dir)
    logging_setup._LOG_DIR = None
    logging_setup._LOG_PATH = None
    yield log_dir


@pytest.fixture(autouse=True)
def _reset_runtime_state(monkeypatch):
    monkeypatch.delenv(ENV_THREADS, raising=False)
    yield
    logging_setup.set_debug(False)


@pytest.fixture
def chain():
    """0 -> 1 -> 2, every edge certain."""
    return WeightedGraph.from_edges([(0, 1), (1, 2)], default_p=1.0)


@pytest.fixture
def star():
    """Center 0 with leaves 1..5, every edge certain."""
    return WeightedGraph.from_edges([(0, leaf) for leaf in range(1, 6)], default_p=1.0)


@pytest.fixture
def diamond():
    """u=0 -> a=1, u -> b=2, a -> c=3, b -> c, all p=0.5."""
    return WeightedGraph.from_edges([(0, 1), (0, 2), (1, 3), (2, 3)], default_p=0.5)


@pytest.fixture
def dilemma():
    """
    Five nodes, two hand-picked snapshots.

    Snapshot 1 keeps 1->0 and 1->2, snapshot 2 keeps 3->2 and 3->4. Drawing a
    fresh snapshot per round makes node 3's gain rise from 1 to 3; on the
    fixed pair it stays flat.
    """
    g = WeightedGraph.from_edges([(1, 0), (1, 2), (3, 2), (3, 4)], default_p=0.5)
    first = Snapshot.from_edges(g, [0, 1])
    second = Snapshot.from_edges(g, [2, 3])
    return g, first, second


@pytest.fixture
def dilemma_sets(dilemma):
    g, first, second = dilemma
    return SnapshotSet(g, (first,)), SnapshotSet(g, (second,)), SnapshotSet(g, (first, second))


def random_graph(seed, n, m, p=0.5):
    """Random simple digraph on n nodes with at most m edges (test helper)."""
    rng = np.random.default_rng(seed)
    edges = []
    seen = set()
    while len(edges) < m and len(seen) < n * (n - 1):
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u == v or (u, v) in seen:
            continue
        seen.add((u, v))
        edges.append((u, v))
    return WeightedGraph.from_edges(edges, node_count=n, default_p=p)


@pytest.fixture
def make_random_graph():
    return random_graph


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.txt"
    path.write_text("0 1\n1 2\n", encoding="utf-8")
    return path
