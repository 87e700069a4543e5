import itertools
import random

import pytest

from overlap_graph_lab.graph import Graph


def random_graph(n, p, rng):
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def naive_subgraph_count(g, pattern):
    """Count edge sets of g isomorphic to the pattern by trying every injective map
    and deduplicating the image edge sets."""
    images = set()
    eset = g.edge_set()
    for nodes in itertools.permutations(range(g.n), pattern.r):
        img = frozenset(tuple(sorted((nodes[u], nodes[v]))) for u, v in pattern.edges)
        if img <= eset:
            images.add(img)
    return len(images)


@pytest.fixture
def rng():
    return random.Random(20240611)


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
