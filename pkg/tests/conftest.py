import networkx as nx
import pytest

from immlab.multigraph import MultiGraph


def _atlas_corpus():
    out = []
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() > 0 and nx.is_connected(h):
            out.append(MultiGraph.from_networkx(h))
    return out


_CORPUS = None


def connected_corpus():
    """All connected simple graphs on 1..7 vertices (networkx atlas order)."""
    global _CORPUS
    if _CORPUS is None:
        _CORPUS = _atlas_corpus()
    return _CORPUS


@pytest.fixture(scope="session")
def corpus():
    return connected_corpus()


@pytest.fixture
def verdict_line(capsys):
    """Print one result line straight to the terminal, bypassing capture."""

    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")

    return emit
