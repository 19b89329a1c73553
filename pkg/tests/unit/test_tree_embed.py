#!/usr/bin/env python3
"""
Tests for greedy, look-ahead path, avoiding-shrub and reserve-set embeddings
"""

import logging
from fractions import Fraction

import pytest

from sparsedecomp.exceptions import InputError, InvariantViolation, PreconditionError
from sparsedecomp.tools.dense_spots import extract_spot_family
from sparsedecomp.tools.generators import complete_bipartite, complete_graph, path_graph, regular_graph
from sparsedecomp.tools.graph_core import Graph
from sparsedecomp.tools.tree_embed import (
    Embedding,
    embed_path_expander,
    embed_shrub_avoiding,
    embed_tree_reserve,
    greedy_embed,
)
from sparsedecomp.tools.trees import RootedTree, all_trees
from sparsedecomp.utils.config import EmbedParams

logger = logging.getLogger(__name__)

QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)


# -- Embedding ---------------------------------------------------------


def test_embedding_rejects_reused_host_vertex():
    """Test that placing two tree vertices on one host vertex fails"""
    emb = Embedding()
    emb.place(0, 5)
    with pytest.raises(InvariantViolation):
        emb.place(1, 5)


def test_embedding_validity_and_dict():
    """Test validity checks and the serialized layout"""
    t = RootedTree.path(3)
    g = path_graph(4)
    emb = Embedding(map={0: 1, 1: 2, 2: 3})
    assert emb.is_valid(t, g)
    assert not Embedding(map={0: 0, 1: 2, 2: 3}).is_valid(t, g)
    assert not Embedding(map={0: 1, 1: 2}).is_valid(t, g)
    assert emb.to_dict() == {"map": {"0": 1, "1": 2, "2": 3}, "reserve": []}


# -- greedy ------------------------------------------------------------


def test_greedy_embeds_every_tree_in_clique():
    """Test that mindeg ≥ k-1 suffices for the greedy embedding"""
    host = complete_graph(7)
    for t in all_trees(7):
        emb = greedy_embed(t, host)
        assert emb is not None
        assert emb.is_valid(t, host)


@pytest.mark.parametrize("k", [4, 5, 6, 7])
@pytest.mark.parametrize(
    "host_of",
    [
        lambda k: regular_graph(12, k - 1, seed=0),
        lambda k: regular_graph(12, k - 1, seed=1),
        lambda k: complete_bipartite(k - 1, k - 1),
    ],
)
def test_greedy_embeds_every_tree_when_mindeg_is_large(k, host_of):
    """Test every tree of order k on hosts of minimum degree k-1"""
    host = host_of(k)
    assert host.mindeg() >= k - 1
    for t in all_trees(k):
        emb = greedy_embed(t, host)
        assert emb is not None
        assert emb.is_valid(t, host)


@pytest.mark.parametrize("k", [4, 5, 6, 7])
def test_greedy_star_needs_degree_k_minus_1(k):
    """Test that the k-vertex star fails on a (k-2)-regular host"""
    assert greedy_embed(RootedTree.star(k), regular_graph(12, k - 2, seed=0)) is None


def test_greedy_fails_without_room():
    """Test that a star cannot go into a path"""
    assert greedy_embed(RootedTree.star(4), path_graph(6)) is None


def test_greedy_start_vertex():
    """Test that an explicit start fixes the root image"""
    emb = greedy_embed(RootedTree.path(3), path_graph(5), start=2)
    assert emb is not None
    assert emb.map[0] == 2
    with pytest.raises(InputError):
        greedy_embed(RootedTree.path(3), path_graph(5), start=9)


def test_greedy_picks_a_workable_start():
    """Test that the greedy tries later start vertices when the first fails"""
    host = Graph(6, [(0, 1), (2, 3), (3, 4), (4, 5)])
    emb = greedy_embed(RootedTree.path(3), host)
    assert emb is not None
    assert emb.map[0] == 2


# -- look-ahead path ---------------------------------------------------


def test_path_embedding_relaxed():
    """Test the relaxed look-ahead path through K(6,6)"""
    host = complete_bipartite(6, 6)
    emb = embed_path_expander(5, host, QUARTER, QUARTER, strict=False)
    assert emb is not None
    assert emb.map == {0: 0, 1: 6, 2: 1, 3: 7, 4: 2}
    assert emb.is_valid(RootedTree.path(5), host)
    assert [entry["step"] for entry in emb.trace] == [1, 2, 3, 4]
    assert emb.trace[-1]["disqualified"] == 4
    assert emb.trace[-1]["max_degree_into_image"] == 3


def test_path_embedding_strict_preconditions():
    """Test that strict mode refuses a dense host"""
    with pytest.raises(PreconditionError) as excinfo:
        embed_path_expander(5, complete_bipartite(6, 6), QUARTER, QUARTER)
    assert excinfo.value.clause == "nowhere_dense"


def test_path_embedding_bad_input():
    """Test path order and empty host checks"""
    with pytest.raises(InputError):
        embed_path_expander(0, path_graph(3), QUARTER, QUARTER, strict=False)
    with pytest.raises(PreconditionError) as excinfo:
        embed_path_expander(3, Graph(0), QUARTER, QUARTER, strict=False)
    assert excinfo.value.clause == "host"


def test_path_embedding_relaxed_gets_stuck():
    """Test that a short host path returns None in relaxed mode"""
    assert embed_path_expander(6, path_graph(4), QUARTER, QUARTER, strict=False) is None


# -- shrubs through the avoiding set -----------------------------------


@pytest.fixture
def family(bicliques):
    return extract_spot_family(bicliques, 2, QUARTER)


@pytest.fixture
def shrub_params():
    return EmbedParams(k=8, gamma=HALF, tau=HALF)


AVOIDING = set(range(8, 16))


def test_shrub_rooted_in_avoiding_neighbour(bicliques, family, shrub_params):
    """Test that the shrub root lands on the first usable avoiding neighbour"""
    emb = embed_shrub_avoiding(RootedTree.path(3), bicliques, family, AVOIDING, 0, set(), shrub_params)
    assert emb is not None
    assert emb.map == {0: 8, 1: 1, 2: 9}
    assert emb.trace == [{"root_image": 8, "spot": 0}]
    assert all(bicliques.has_edge(emb.map[a], emb.map[b]) for a, b in RootedTree.path(3).edges)


def test_shrub_skips_used_vertices(bicliques, family, shrub_params):
    """Test that used vertices are never reused"""
    emb = embed_shrub_avoiding(RootedTree.path(3), bicliques, family, AVOIDING, 0, {1}, shrub_params)
    assert emb is not None
    assert emb.map == {0: 8, 1: 2, 2: 9}


def test_shrub_fails_when_spot_is_crowded(bicliques, family, shrub_params):
    """Test that a spot meeting the used set in more than γ²k vertices is skipped"""
    assert embed_shrub_avoiding(RootedTree.path(3), bicliques, family, AVOIDING, 0, {1, 2}, shrub_params) is None


def test_shrub_preconditions(bicliques, family, shrub_params):
    """Test the shrub order and anchor degree clauses"""
    with pytest.raises(PreconditionError) as excinfo:
        embed_shrub_avoiding(RootedTree.path(5), bicliques, family, AVOIDING, 0, set(), shrub_params)
    assert excinfo.value.clause == "shrub_order"
    with pytest.raises(PreconditionError) as excinfo:
        embed_shrub_avoiding(RootedTree.path(3), bicliques, family, {8}, 0, set(), shrub_params)
    assert excinfo.value.clause == "anchor_degree"
    with pytest.raises(InputError):
        embed_shrub_avoiding(RootedTree.path(3), bicliques, family, AVOIDING, 99, set(), shrub_params)


# -- reserve-set embedding ---------------------------------------------


@pytest.fixture
def reserve_params():
    return EmbedParams(k=6, rho=HALF, strict=False, seed=3)


def test_reserve_embedding_in_clique(reserve_params):
    """Test a relaxed reserve embedding of a path into K20"""
    t = RootedTree.path(6)
    host = complete_graph(20)
    seeds = {0, 1, 2}
    emb = embed_tree_reserve(t, host, seeds, reserve_params)
    assert emb is not None
    assert emb.is_valid(t, host)
    assert emb.map[0] in seeds
    assert not emb.reserve & emb.image
    summary = emb.trace[-1]
    assert summary["shrubs"] == 1
    assert summary["threshold"] == "-5/4"
    assert emb.trace[0]["magic_ok"]


def test_reserve_embedding_is_seeded(reserve_params):
    """Test that the same seed reproduces the same embedding"""
    t = RootedTree.complete_binary(3)
    host = complete_graph(20)
    first = embed_tree_reserve(t, host, range(5), reserve_params.model_copy(update={"k": 7}))
    second = embed_tree_reserve(t, host, range(5), reserve_params.model_copy(update={"k": 7}))
    assert first is not None
    assert first.to_dict() == second.to_dict()


@pytest.mark.parametrize(
    "tree,seeds,update,clause",
    [
        (RootedTree.star(6), {0}, {}, "maxdeg"),
        (RootedTree.path(6), {0}, {"q": 3}, "q"),
        (RootedTree.path(6), set(), {}, "seeds"),
        (RootedTree.path(6), {25}, {}, "seeds"),
        (RootedTree.path(6), {0}, {"strict": True}, "nowhere_dense"),
    ],
)
def test_reserve_preconditions(reserve_params, tree, seeds, update, clause):
    """Test each reserve-embedding precondition"""
    with pytest.raises(PreconditionError) as excinfo:
        embed_tree_reserve(tree, complete_graph(20), seeds, reserve_params.model_copy(update=update))
    assert excinfo.value.clause == clause


def test_reserve_seed_degree(reserve_params):
    """Test that low-degree seeds are refused"""
    host = Graph(20, [(a, b) for a in range(1, 20) for b in range(a + 1, 20)])
    with pytest.raises(PreconditionError) as excinfo:
        embed_tree_reserve(RootedTree.path(6), host, {0}, reserve_params)
    assert excinfo.value.clause == "seeds"
