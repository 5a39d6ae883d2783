"""Graph incidence-matrix fast path.

For incidence matrices the always-recoverable supports are governed by the
simple cycles of the underlying undirected graph: a support qualifies exactly
when it covers strictly less than half of every simple cycle's edges, and the
nullspace constant collapses to min(1, s/girth).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .errors import BudgetExceededError, InputError
from .linalg import RealMatrix, nullspace_basis
from .masc import ExtremePoint, MembershipVerdict, SupportSet

__all__ = [
    "DirectedSimpleGraph",
    "SimpleCycle",
    "incidence_matrix",
    "enumerate_simple_cycles",
    "girth",
    "w1",
    "masc_contains_graph",
    "nsc_graph",
    "max_uniform_sparsity",
    "erdos_renyi",
    "parse_graph_text",
    "format_graph_text",
]

DEFAULT_CYCLE_CAP = 10**6
INF_GIRTH = math.inf


@dataclass(frozen=True)
class DirectedSimpleGraph:
    """Simple directed graph; edge order fixes incidence-matrix columns."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for tail, head in self.edges:
            if tail == head:
                raise InputError("self loops are not allowed")
            if not (0 <= tail < self.vertex_count and 0 <= head < self.vertex_count):
                raise InputError("edge endpoint out of range")
            key = frozenset((tail, head))
            if key in seen:
                raise InputError("at most one edge per vertex pair (simple graph)")
            seen.add(key)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def undirected(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        for idx, (tail, head) in enumerate(self.edges):
            g.add_edge(tail, head, index=idx)
        return g


@dataclass(frozen=True)
class SimpleCycle:
    """A simple cycle with its signed edge-characteristic vector."""

    vertices: tuple[int, ...]  # closed: first vertex repeated at the end
    signed_char_vector: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def edge_indices(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.signed_char_vector) if s != 0)


def incidence_matrix(g: DirectedSimpleGraph) -> RealMatrix:
    """Vertex-by-edge matrix: -1 at each edge's tail, +1 at its head."""
    rows = [[Fraction(0)] * g.edge_count for _ in range(g.vertex_count)]
    for j, (tail, head) in enumerate(g.edges):
        rows[tail][j] = Fraction(-1)
        rows[head][j] = Fraction(1)
    return RealMatrix.from_rows(rows, exact=True)


def _cycle_from_nodes(g: DirectedSimpleGraph, nodes: list[int]) -> SimpleCycle:
    edge_index = {}
    for idx, (tail, head) in enumerate(g.edges):
        edge_index[(tail, head)] = (idx, 1)
        edge_index[(head, tail)] = (idx, -1)
    closed = list(nodes) + [nodes[0]]
    char = [0] * g.edge_count
    for u, v in zip(closed, closed[1:]):
        idx, sign = edge_index[(u, v)]
        char[idx] = sign
    # canonical orientation: lowest-indexed edge traversed forward
    first = next(i for i, s in enumerate(char) if s != 0)
    if char[first] < 0:
        char = [-s for s in char]
        closed = closed[::-1]
    return SimpleCycle(tuple(closed), tuple(char))


def enumerate_simple_cycles(
    g: DirectedSimpleGraph, cap: int = DEFAULT_CYCLE_CAP
) -> list[SimpleCycle]:
    """All simple cycles of the underlying undirected graph, each once.

    Deterministic order: by length, then lexicographically by sorted
    edge-index set. Raises when the cycle count exceeds the cap.
    """
    out = []
    for nodes in nx.simple_cycles(g.undirected()):
        out.append(_cycle_from_nodes(g, nodes))
        if len(out) > cap:
            raise BudgetExceededError(
                f"more than {cap} simple cycles; use the lazy membership mode"
            )
    out.sort(key=lambda c: (c.length, c.edge_indices))
    return out


def iter_simple_cycles(g: DirectedSimpleGraph):
    """Streaming cycle generator (no cap, no deterministic global order)."""
    for nodes in nx.simple_cycles(g.undirected()):
        yield _cycle_from_nodes(g, nodes)


def girth(g: DirectedSimpleGraph) -> float:
    """Length of the shortest simple cycle; math.inf for forests.

    BFS from every vertex on the underlying undirected graph, O(mn) total.
    """
    adj = [[] for _ in range(g.vertex_count)]
    for tail, head in g.edges:
        adj[tail].append(head)
        adj[head].append(tail)
    best = INF_GIRTH
    for root in range(g.vertex_count):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        nxt.append(v)
                    elif parent[u] != v and dist[v] >= dist[u]:
                        # non-tree edge closes a walk containing a cycle
                        best = min(best, dist[u] + dist[v] + 1)
            queue = nxt
    return best


def w1(g: DirectedSimpleGraph, cap: int = DEFAULT_CYCLE_CAP) -> list[ExtremePoint]:
    """Normalized signed characteristic vectors, one per cycle.

    These are exactly the extreme points of the flow space intersected with
    the l1 ball, up to antipodes.
    """
    n = g.edge_count
    pts = []
    for cyc in enumerate_simple_cycles(g, cap=cap):
        r = cyc.length
        vec = tuple(Fraction(s, r) for s in cyc.signed_char_vector)
        support = SupportSet(n, cyc.edge_indices)
        pts.append(ExtremePoint(vec, support, cyc.signed_char_vector, exact=True))
    return pts


def masc_contains_graph(
    g: DirectedSimpleGraph,
    s: SupportSet,
    lazy: bool = False,
    cap: int = DEFAULT_CYCLE_CAP,
) -> MembershipVerdict:
    """Exact integer-arithmetic membership check over edge supports.

    A support is in the family iff 2 * |S intersect cycle| < cycle length for
    every simple cycle. Lazy mode streams cycles and stops at the first
    violation; exhaustive mode also reports the margin.
    """
    if s.ambient_dim != g.edge_count:
        raise InputError("support must index the graph's edges")
    sset = set(s.indices)

    def check(cyc: SimpleCycle):
        overlap = sum(1 for i in cyc.edge_indices if i in sset)
        return Fraction(1, 2) - Fraction(overlap, cyc.length), cyc

    if lazy:
        for cyc in iter_simple_cycles(g):
            margin, cyc = check(cyc)
            if margin <= 0:
                vec = tuple(Fraction(x, cyc.length) for x in cyc.signed_char_vector)
                wit = ExtremePoint(
                    vec, SupportSet(g.edge_count, cyc.edge_indices),
                    cyc.signed_char_vector, exact=True,
                )
                return MembershipVerdict(True, False, margin, wit)
        return MembershipVerdict(True, True, Fraction(1, 2), None)

    worst = Fraction(1, 2)
    witness = None
    for cyc in enumerate_simple_cycles(g, cap=cap):
        margin, cyc = check(cyc)
        if margin < worst:
            worst = margin
            witness = cyc
    if worst > 0:
        return MembershipVerdict(True, True, worst, None)
    vec = tuple(Fraction(x, witness.length) for x in witness.signed_char_vector)
    wit = ExtremePoint(
        vec, SupportSet(g.edge_count, witness.edge_indices),
        witness.signed_char_vector, exact=True,
    )
    return MembershipVerdict(True, False, worst, wit)


def nsc_graph(s: int, g: DirectedSimpleGraph) -> Fraction:
    """Closed-form nullspace constant min(1, s/girth); 0 for forests."""
    if s < 1:
        raise InputError("sparsity must be >= 1")
    girth_val = girth(g)
    if girth_val is INF_GIRTH or girth_val == INF_GIRTH:
        return Fraction(0)
    return min(Fraction(1), Fraction(s, int(girth_val)))


def max_uniform_sparsity(g: DirectedSimpleGraph) -> int:
    """Largest s with 2s < girth; the edge count for forests."""
    girth_val = girth(g)
    if girth_val == INF_GIRTH:
        return g.edge_count
    return (int(girth_val) - 1) // 2


def erdos_renyi(vertices: int, p: float, seed: int) -> DirectedSimpleGraph:
    """Each unordered pair becomes an edge independently with probability p,
    oriented low index to high index. Deterministic given the seed."""
    if not 0.0 <= p <= 1.0:
        raise InputError("edge probability must be in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    edges = []
    for u in range(vertices):
        draws = rng.random(vertices - u - 1)
        for off, r in enumerate(draws):
            if r < p:
                edges.append((u, u + 1 + off))
    return DirectedSimpleGraph(vertices, tuple(edges))


# Graph text format: header "m n", then one "tail head" pair per line.


def parse_graph_text(text: str) -> DirectedSimpleGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty graph file")
    m, n = map(int, lines[0].split())
    edges = []
    for ln in lines[1:]:
        tail, head = map(int, ln.split())
        edges.append((tail, head))
    if len(edges) != n:
        raise InputError("edge count does not match header")
    return DirectedSimpleGraph(m, tuple(edges))


def format_graph_text(g: DirectedSimpleGraph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines += [f"{t} {h}" for t, h in g.edges]
    return "\n".join(lines) + "\n"


def flow_space_basis(g: DirectedSimpleGraph):
    """Exact nullspace basis of the incidence matrix (generic-path bridge)."""
    return nullspace_basis(incidence_matrix(g))
