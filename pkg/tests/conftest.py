import pytest

from nigpart.hgraph import build_hypergraph


@pytest.fixture
def h0():
    """Four unit vertices, three unit nets forming a chain."""
    return build_hypergraph(
        4, 3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3)])
