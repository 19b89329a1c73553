#!/usr/bin/env python3
"""
Tests for the graph core: graphs, densities, partitions and min-degree peeling
"""

import logging
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsedecomp.exceptions import InputError
from sparsedecomp.tools.generators import complete_bipartite, complete_graph, path_graph
from sparsedecomp.tools.graph_core import (
    Graph,
    Partition,
    common_refinement,
    density,
    min_degree_subgraph,
    ordered_pair_count,
    refine_all,
)
from tests.fixtures.graphs import graphs

logger = logging.getLogger(__name__)


def test_graph_basic_queries():
    """Test degrees, neighbourhoods and edge normalization"""
    g = Graph(4, [(1, 0), (1, 2), (2, 3)])
    assert g.order == 4
    assert g.e == 3
    assert g.edges == ((0, 1), (1, 2), (2, 3))
    assert g.degree(1) == 2
    assert g.neighbors(2) == frozenset({1, 3})
    assert g.has_edge(2, 1)
    assert not g.has_edge(0, 3)
    assert g.mindeg() == 1
    assert g.maxdeg() == 2


def test_graph_rejects_bad_input():
    """Test that malformed graphs raise InputError"""
    with pytest.raises(InputError):
        Graph(-1)
    with pytest.raises(InputError):
        Graph(3, [(0, 0)])
    with pytest.raises(InputError):
        Graph(3, [(0, 3)])
    with pytest.raises(InputError):
        Graph(3, [(0, 1, 2)])
    with pytest.raises(InputError):
        Graph(3, [], vertices=[5])


def test_duplicate_edges_collapse():
    """Test that repeated edges are stored once"""
    g = Graph(3, [(0, 1), (1, 0), (0, 1)])
    assert g.e == 1


def test_empty_graph_mindeg_is_infinite():
    """Test min degree of the empty vertex set"""
    g = Graph(0)
    assert g.order == 0
    assert g.mindeg() == float("inf")
    assert g.maxdeg() == 0


def test_derived_graphs_keep_universe():
    """Test that induced subgraphs keep the host's id universe"""
    g = complete_graph(5)
    sub = g.induced({1, 3, 4})
    assert sub.n == 5
    assert sub.vertices == frozenset({1, 3, 4})
    assert sub.e == 3
    assert g.remove_vertices({0}).e == 6
    assert g.remove_edges([(1, 0)]).e == 9
    assert g.spanning([(0, 1)]).order == 5
    assert g.edge_subgraph([(3, 4)]).vertices == frozenset({3, 4})
    with pytest.raises(InputError):
        sub.induced({0})


def test_to_dict_round_trip_with_vertex_subset():
    """Test that graph JSON carries vertices only when they differ from the universe"""
    g = path_graph(4)
    assert g.to_dict() == {"n": 4, "edges": [[0, 1], [1, 2], [2, 3]]}
    sub = g.induced({1, 2})
    data = sub.to_dict()
    assert data["vertices"] == [1, 2]
    assert Graph.from_dict(data) == sub


@pytest.mark.parametrize(
    "payload",
    [[], {"edges": []}, {"n": "3"}, {"n": True}, {"n": 3, "edges": {}}],
)
def test_from_dict_rejects_malformed(payload):
    """Test graph JSON validation"""
    with pytest.raises(InputError):
        Graph.from_dict(payload)


def test_networkx_round_trip():
    """Test conversion to and from networkx"""
    g = complete_bipartite(2, 3)
    h = g.to_networkx()
    assert nx.is_bipartite(h)
    assert Graph.from_networkx(h) == g


def test_pair_count_and_density():
    """Test e(X,Y) and d(X,Y) on a complete bipartite graph"""
    g = complete_bipartite(3, 4)
    left, right = range(3), range(3, 7)
    assert ordered_pair_count(g, left, right) == 12
    assert ordered_pair_count(g, left, left) == 0
    assert ordered_pair_count(g, g.vertices, g.vertices) == 2 * g.e
    assert density(g, left, right) == Fraction(1)
    assert density(g, {0, 3}, {1, 4}) == Fraction(1, 2)


def test_density_requires_disjoint_nonempty_sets():
    """Test density preconditions"""
    g = complete_graph(4)
    with pytest.raises(InputError):
        density(g, set(), {1})
    with pytest.raises(InputError):
        density(g, {0, 1}, {1, 2})


def test_partition_validation_and_order():
    """Test partition construction rules"""
    p = Partition([{5, 3}, {0, 2}, {1, 4}])
    assert p.to_list() == [[0, 2], [1, 4], [3, 5]]
    assert p.block_of(5) == 2
    with pytest.raises(InputError):
        Partition([{0}, {0, 1}])
    with pytest.raises(InputError):
        Partition([set()])
    with pytest.raises(InputError):
        Partition([{0}], ground={0, 1})
    assert len(Partition.trivial(set())) == 0
    assert Partition.trivial({0, 1}).to_list() == [[0, 1]]


def test_common_refinement():
    """Test that p ⊞ q refines both inputs"""
    p = Partition([{0, 1, 2}, {3, 4, 5}])
    q = Partition([{0, 3}, {1, 2, 4, 5}])
    r = common_refinement(p, q)
    assert r.to_list() == [[0], [1, 2], [3], [4, 5]]
    assert r.refines(p) and r.refines(q)
    assert not p.refines(r)
    assert refine_all(range(6), [p, q]) == r
    with pytest.raises(InputError):
        common_refinement(p, Partition([{0, 1}]))


def test_partition_restrict():
    """Test restriction to a subset"""
    p = Partition([{0, 1}, {2, 3}])
    assert p.restrict({1, 2, 3}).to_list() == [[1], [2, 3]]


def test_min_degree_subgraph_peels_tail():
    """Test the ℓ-core of a clique with a pendant path"""
    g = Graph(7, list(complete_graph(4).edges) + [(3, 4), (4, 5), (5, 6)])
    core = min_degree_subgraph(g, 3)
    assert core.vertices == frozenset(range(4))
    assert min_degree_subgraph(g, 4).order == 0
    assert min_degree_subgraph(g, 0) == g
    with pytest.raises(InputError):
        min_degree_subgraph(g, -1)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10), st.integers(min_value=0, max_value=5), st.integers(min_value=0, max_value=1000))
def test_min_degree_subgraph_is_order_independent(g, ell, seed):
    """Test that the core matches networkx and ignores deletion order"""
    core = min_degree_subgraph(g, ell, random.Random(seed))
    assert core == min_degree_subgraph(g, ell)
    assert core.mindeg() >= ell
    expected = set(nx.k_core(nx.Graph(g.to_networkx()), ell).nodes) if g.order else set()
    assert core.vertices == frozenset(expected)
