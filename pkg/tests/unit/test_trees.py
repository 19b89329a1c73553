#!/usr/bin/env python3
"""
Tests for rooted trees, canonical codes, the small-tree corpus and shrubs
"""

import logging
from fractions import Fraction

import networkx as nx
import pytest

from sparsedecomp.exceptions import InputError
from sparsedecomp.tools.trees import (
    RootedTree,
    all_trees,
    canonical_code,
    shrub_decompose,
    split_at,
    subtree,
    tree_centers,
)

logger = logging.getLogger(__name__)

TREE_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11, 8: 23, 9: 47, 10: 106}


@pytest.mark.parametrize("k,count", sorted(TREE_COUNTS.items()))
def test_all_trees_counts(k, count):
    """Test the number of unlabelled trees of each order"""
    trees = all_trees(k)
    assert len(trees) == count
    assert all(t.order == k for t in trees)
    assert len({canonical_code(t) for t in trees}) == count


def test_all_trees_bounds():
    """Test the corpus order limits"""
    with pytest.raises(InputError):
        all_trees(0)
    with pytest.raises(InputError):
        all_trees(11)


def test_canonical_code_ignores_labels_and_root():
    """Test that relabelled and rerooted copies share a code"""
    a = RootedTree.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    b = RootedTree.from_edges(5, [(4, 2), (2, 0), (2, 3), (0, 1)], root=3)
    assert canonical_code(a) == canonical_code(b)
    assert canonical_code(RootedTree.path(5)) != canonical_code(RootedTree.star(5))


def test_tree_centers():
    """Test center finding on paths"""
    assert tree_centers(RootedTree.path(5).adjacency()) == [2]
    assert tree_centers(RootedTree.path(4).adjacency()) == [1, 2]


def test_invalid_parent_arrays():
    """Test that malformed trees raise InputError"""
    with pytest.raises(InputError):
        RootedTree(())
    with pytest.raises(InputError):
        RootedTree((-1, 2, 1))
    with pytest.raises(InputError):
        RootedTree((0, -1), root=0)
    with pytest.raises(InputError):
        RootedTree.from_edges(3, [(0, 1)])
    with pytest.raises(InputError):
        RootedTree.from_dict({"k": 3, "parent": [-1, 0]})


def test_tree_statistics():
    """Test depth, max degree and independence number"""
    t = RootedTree.complete_binary(3)
    assert t.order == 7
    assert t.depth() == [0, 1, 1, 2, 2, 2, 2]
    assert t.maxdeg() == 3
    assert t.independence_number() == 5
    assert RootedTree.star(6).independence_number() == 5
    assert RootedTree.path(6).independence_number() == 3


def test_prufer_and_networkx_round_trip():
    """Test tree construction from Prüfer sequences and networkx"""
    t = RootedTree.from_prufer([3, 3, 3])
    assert t.order == 5
    assert nx.is_isomorphic(t.to_networkx(), nx.star_graph(4))
    assert RootedTree.from_dict(t.to_dict()) == t


def test_split_at_components():
    """Test components of T - W on a path"""
    d = split_at(RootedTree.path(7), {3})
    assert [sorted(s.vertices) for s in d.shrubs] == [[0, 1, 2], [4, 5, 6]]
    assert [s.root for s in d.shrubs] == [0, 4]
    assert all(s.is_end for s in d.shrubs)


@pytest.mark.slow
@pytest.mark.parametrize("k", [6, 8, 9])
def test_shrub_decompose_respects_limit(k):
    """Test that every shrub has at most τk vertices and shrubs tile T - W"""
    tau = Fraction(1, 2)
    for t in all_trees(k):
        d = shrub_decompose(t, tau, k)
        covered = set(d.cut_vertices)
        for shrub in d.shrubs:
            assert len(shrub.vertices) <= tau * k
            assert not covered & shrub.vertices
            covered |= shrub.vertices
        assert covered == set(range(k))


def test_shrub_decompose_preconditions():
    """Test τ range and order checks"""
    t = RootedTree.path(4)
    with pytest.raises(InputError):
        shrub_decompose(t, Fraction(0), 4)
    with pytest.raises(InputError):
        shrub_decompose(t, Fraction(1, 8), 4)
    with pytest.raises(InputError):
        shrub_decompose(t, Fraction(1, 2), 5)


def test_subtree_relabels_from_root():
    """Test induced subtree extraction"""
    t = RootedTree.path(6)
    sub, old = subtree(t, {2, 3, 4}, 3)
    assert old == [3, 2, 4]
    assert sub.order == 3
    assert sub.maxdeg() == 2
    with pytest.raises(InputError):
        subtree(t, {2, 3}, 5)
