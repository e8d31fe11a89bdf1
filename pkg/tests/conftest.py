import numpy as np
import pytest

from lgc.graph import VertexSet, WeightedGraph, is_connected


def two_cliques(k=10, bridge_weight=1.0):
    """Two K_k cliques joined by a single (weighted) edge between 0 and k."""
    edges = []
    for base in (0, k):
        for i in range(k):
            for j in range(i + 1, k):
                edges.append((base + i, base + j, 1.0))
    edges.append((0, k, bridge_weight))
    return WeightedGraph.from_edges(edges, n=2 * k)


def random_connected_graph(rng, n_low=10, n_high=80, p=0.15, weighted=False):
    """Erdos-Renyi graph resampled until connected."""
    while True:
        n = int(rng.integers(n_low, n_high + 1))
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    w = float(rng.uniform(0.2, 3.0)) if weighted else 1.0
                    edges.append((i, j, w))
        if not edges:
            continue
        g = WeightedGraph.from_edges(edges, n=n)
        if is_connected(g):
            return g


def random_mass(rng, graph, support_size=None, normalize=True):
    """Random nonnegative sparse vector over vertices of positive degree."""
    from lgc.pagerank import SparseMass

    candidates = np.flatnonzero(graph.degrees > 0)
    size = support_size or int(rng.integers(1, min(len(candidates), 8) + 1))
    ids = rng.choice(candidates, size=size, replace=False)
    vals = rng.uniform(0.1, 1.0, size=size)
    if normalize:
        vals = vals / vals.sum()
    return SparseMass({int(u): float(v) for u, v in zip(ids, vals)})


@pytest.fixture
def c4():
    return WeightedGraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def k4():
    return WeightedGraph.from_edges([(i, j) for i in range(4) for j in range(i + 1, 4)])


@pytest.fixture
def path3():
    return WeightedGraph.from_edges([(0, 1), (1, 2)])


@pytest.fixture
def two_triangles():
    # triangles {0,1,2} and {3,4,5} joined by the edge 2-3
    return WeightedGraph.from_edges(
        [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


@pytest.fixture
def two_k10():
    return two_cliques(10)


def vset(graph, ids):
    return VertexSet(graph, ids)
