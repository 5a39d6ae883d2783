import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_connected_graph
from masckit.errors import BudgetExceededError, InputError
from masckit.graphs import (
    DirectedSimpleGraph,
    enumerate_simple_cycles,
    erdos_renyi,
    flow_space_basis,
    format_graph_text,
    girth,
    incidence_matrix,
    masc_contains_graph,
    max_uniform_sparsity,
    nsc_graph,
    parse_graph_text,
    w1,
)
from masckit.linalg import nullspace_basis
from masckit.masc import (
    SupportSet,
    enumerate_extreme_points,
    masc_contains,
    nullspace_constant,
)


def k4(orient_seed=0):
    rng = random.Random(orient_seed)
    edges = tuple(
        (u, v) if rng.random() < 0.5 else (v, u)
        for u, v in itertools.combinations(range(4), 2)
    )
    return DirectedSimpleGraph(4, edges)


class TestGraphConstruction:
    def test_self_loop_rejected(self):
        with pytest.raises(InputError):
            DirectedSimpleGraph(3, ((0, 0),))

    def test_parallel_rejected(self):
        with pytest.raises(InputError):
            DirectedSimpleGraph(3, ((0, 1), (1, 0)))

    def test_text_roundtrip(self, chain_graph):
        again = parse_graph_text(format_graph_text(chain_graph))
        assert again == chain_graph


class TestIncidenceMatrix:
    def test_column_structure(self, triangle):
        m = incidence_matrix(triangle)
        for j in range(3):
            col = [m[i, j] for i in range(3)]
            assert sorted(col) == [Fraction(-1), Fraction(0), Fraction(1)]

    def test_single_edge(self):
        m = incidence_matrix(DirectedSimpleGraph(2, ((0, 1),)))
        assert (m[0, 0], m[1, 0]) == (Fraction(-1), Fraction(1))

    def test_char_vectors_in_nullspace(self, chain_graph):
        m = incidence_matrix(chain_graph)
        for cyc in enumerate_simple_cycles(chain_graph):
            for i in range(m.rows):
                assert sum(m[i, j] * cyc.signed_char_vector[j] for j in range(m.cols)) == 0


class TestCycleEnumeration:
    def test_chain_graph_cycles(self, chain_graph):
        cycles = enumerate_simple_cycles(chain_graph)
        edge_sets = [set(c.edge_indices) for c in cycles]
        assert edge_sets == [{0, 1, 2}, {1, 3, 4, 5, 6}, {0, 2, 3, 4, 5, 6}]

    def test_tree_empty(self):
        tree = DirectedSimpleGraph(4, ((0, 1), (1, 2), (1, 3)))
        assert enumerate_simple_cycles(tree) == []

    def test_k4_seven_cycles(self):
        assert len(enumerate_simple_cycles(k4())) == 7

    def test_cap(self, chain_graph):
        with pytest.raises(BudgetExceededError):
            enumerate_simple_cycles(chain_graph, cap=2)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_reorientation_invariance(self, seed):
        rng = random.Random(seed)
        g = random_connected_graph(rng)
        flipped = tuple(
            (v, u) if rng.random() < 0.5 else (u, v) for u, v in g.edges
        )
        g2 = DirectedSimpleGraph(g.vertex_count, flipped)
        sets1 = sorted(frozenset(c.edge_indices) for c in enumerate_simple_cycles(g))
        sets2 = sorted(frozenset(c.edge_indices) for c in enumerate_simple_cycles(g2))
        assert sets1 == sets2


class TestGirth:
    def test_cycle_graph(self):
        g = DirectedSimpleGraph(7, tuple((i, (i + 1) % 7) for i in range(7)))
        assert girth(g) == 7

    def test_tree_infinite(self):
        assert girth(DirectedSimpleGraph(3, ((0, 1), (1, 2)))) == math.inf

    def test_chain_graph(self, chain_graph):
        assert girth(chain_graph) == 3

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_cycle_enumeration(self, seed):
        g = random_connected_graph(random.Random(seed))
        cycles = enumerate_simple_cycles(g)
        expected = min((c.length for c in cycles), default=math.inf)
        assert girth(g) == expected


class TestW1:
    def test_triangle(self, triangle):
        vecs = w1(triangle)
        assert len(vecs) == 1
        assert sorted(abs(x) for x in vecs[0].vector) == [Fraction(1, 3)] * 3

    def test_chain_graph_norms(self, chain_graph):
        lengths = sorted(
            {abs(x).denominator for v in w1(chain_graph) for x in v.vector if x}
        )
        assert lengths == [3, 5, 6]

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_equals_generic_extreme_points(self, seed):
        g = random_connected_graph(random.Random(seed))
        fast = {
            (p.support.indices, tuple(abs(x) for x in p.vector)) for p in w1(g)
        }
        generic = {
            (p.support.indices, tuple(abs(x) for x in p.vector))
            for p in enumerate_extreme_points(flow_space_basis(g))
        }
        assert fast == generic


class TestMascContainsGraph:
    def test_chain_graph_in(self, chain_graph):
        v = masc_contains_graph(chain_graph, SupportSet.of(7, [0, 4]))
        assert v.decided and v.in_masc

    def test_chain_graph_out_with_witness(self, chain_graph):
        v = masc_contains_graph(chain_graph, SupportSet.of(7, [0, 1]))
        assert not v.in_masc
        assert v.witness.support.indices == (0, 1, 2)

    def test_empty_in(self, chain_graph):
        assert masc_contains_graph(chain_graph, SupportSet.of(7, [])).in_masc

    def test_lazy_agrees(self, chain_graph):
        for r in range(4):
            for sup in itertools.combinations(range(7), r):
                s = SupportSet.of(7, sup)
                assert (
                    masc_contains_graph(chain_graph, s, lazy=True).in_masc
                    == masc_contains_graph(chain_graph, s).in_masc
                )

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6))
    def test_agrees_with_generic(self, seed):
        g = random_connected_graph(random.Random(seed))
        n = g.edge_count
        b = flow_space_basis(g)
        pts = enumerate_extreme_points(b)
        for r in range(n + 1):
            for sup in itertools.combinations(range(n), r):
                s = SupportSet.of(n, sup)
                assert (
                    masc_contains_graph(g, s).in_masc
                    == masc_contains(b, s, pts=pts).in_masc
                )


class TestClosedForms:
    def test_nsc_values(self, triangle):
        assert nsc_graph(1, triangle) == Fraction(1, 3)
        assert nsc_graph(2, triangle) == Fraction(2, 3)
        assert nsc_graph(5, triangle) == 1

    def test_nsc_forest(self):
        tree = DirectedSimpleGraph(3, ((0, 1), (1, 2)))
        assert nsc_graph(2, tree) == 0

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_nsc_matches_generic(self, seed):
        g = random_connected_graph(random.Random(seed))
        b = flow_space_basis(g)
        pts = enumerate_extreme_points(b)
        for s in range(1, g.edge_count + 1):
            assert nsc_graph(s, g) == nullspace_constant(s, b, pts=pts)

    def test_max_uniform_sparsity(self, triangle):
        assert max_uniform_sparsity(triangle) == 1
        g7 = DirectedSimpleGraph(7, tuple((i, (i + 1) % 7) for i in range(7)))
        assert max_uniform_sparsity(g7) == 3
        tree = DirectedSimpleGraph(3, ((0, 1), (1, 2)))
        assert max_uniform_sparsity(tree) == 2

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10**6))
    def test_uniform_sparsity_threshold(self, seed):
        # all supports of size s accepted iff s <= max_uniform_sparsity
        g = random_connected_graph(random.Random(seed), max_edges=6)
        n = g.edge_count
        smax = max_uniform_sparsity(g)
        for s in range(1, n + 1):
            all_in = all(
                masc_contains_graph(g, SupportSet.of(n, c)).in_masc
                for c in itertools.combinations(range(n), s)
            )
            assert all_in == (s <= smax)


class TestErdosRenyi:
    def test_p_zero(self):
        assert erdos_renyi(10, 0.0, 1).edge_count == 0

    def test_p_one(self):
        assert erdos_renyi(100, 1.0, 1).edge_count == 4950

    def test_deterministic(self):
        assert erdos_renyi(30, 0.2, 5) == erdos_renyi(30, 0.2, 5)

    def test_mean_edges_near_expectation(self):
        p = math.log(100) / 100
        counts = [erdos_renyi(100, p, seed).edge_count for seed in range(50)]
        mean = np.mean(counts)
        # expectation 4950p ~ 228, sd of the mean ~ 2.1
        assert abs(mean - 4950 * p) < 3 * math.sqrt(4950 * p * (1 - p) / 50)
