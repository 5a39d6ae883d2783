"""Shared fixtures: small worked-example matrices and random graph helpers."""

import random

import pytest

from masckit.graphs import DirectedSimpleGraph
from masckit.linalg import RealMatrix


@pytest.fixture
def chain_graph():
    """Triangle {0,1,2} joined to a pendant 4-cycle path: 7 edges, 6 vertices.

    Edge letters a..g map to columns 0..6; cycles have edge sets
    {a,b,c}, {b,d,e,f,g}, {a,c,d,e,f,g}.
    """
    return DirectedSimpleGraph(
        6, ((0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 1))
    )


@pytest.fixture
def triangle():
    return DirectedSimpleGraph(3, ((0, 1), (1, 2), (2, 0)))


def random_connected_graph(rng: random.Random, max_edges: int = 8) -> DirectedSimpleGraph:
    """Random connected simple digraph with between 3 and max_edges edges."""
    while True:
        vertices = rng.randint(3, 6)
        pairs = [(u, v) for u in range(vertices) for v in range(u + 1, vertices)]
        want = rng.randint(vertices - 1, min(max_edges, len(pairs)))
        # spanning tree first so the graph is connected
        nodes = list(range(vertices))
        rng.shuffle(nodes)
        edges = set()
        for i in range(1, vertices):
            a, b = nodes[rng.randrange(i)], nodes[i]
            edges.add((min(a, b), max(a, b)))
        extra = [p for p in pairs if p not in edges]
        rng.shuffle(extra)
        while len(edges) < want and extra:
            edges.add(extra.pop())
        if len(edges) <= max_edges:
            oriented = tuple(
                (u, v) if rng.random() < 0.5 else (v, u) for u, v in sorted(edges)
            )
            return DirectedSimpleGraph(vertices, oriented)


def random_rational_matrix(rng: random.Random, rows: int, cols: int) -> RealMatrix:
    return RealMatrix.from_rows(
        [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)], exact=True
    )
