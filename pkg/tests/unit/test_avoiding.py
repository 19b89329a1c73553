#!/usr/bin/env python3
"""
Tests for exceptional vertices, the challenge suite and avoiding-set shrinking
"""

import logging
from fractions import Fraction

import pytest

from sparsedecomp.tools.avoiding import (
    challenge_suite,
    exceptional_vertices,
    shrink_to_avoiding,
    worst_exceptional,
)
from sparsedecomp.tools.dense_spots import SpotFamily, extract_spot_family
from sparsedecomp.tools.graph_core import Graph
from tests.fixtures.graphs import desk_params

logger = logging.getLogger(__name__)

QUARTER = Fraction(1, 4)


@pytest.fixture
def family(bicliques) -> SpotFamily:
    """The two whole-biclique spots"""
    return extract_spot_family(bicliques, 2, QUARTER)


def test_exceptional_vertices_follow_challenge_hits(family):
    """Test that hitting a spot makes its avoiding vertices exceptional"""
    avoiding = {0, 1, 16}
    assert exceptional_vertices(family, avoiding, set(), QUARTER, 8) == frozenset()
    assert exceptional_vertices(family, avoiding, {0}, QUARTER, 8) == frozenset({0, 1})
    assert exceptional_vertices(family, avoiding, {3, 20}, QUARTER, 8) == frozenset({0, 1, 16})


def test_vertices_outside_spots_are_always_exceptional():
    """Test that a vertex in no spot has no light spot"""
    fam = SpotFamily.from_spots(3, [])
    assert exceptional_vertices(fam, {2}, set(), QUARTER, 8) == frozenset({2})


def test_challenge_suite_shape(bicliques, family):
    """Test the suite: empty set, random sets, adversary"""
    params = desk_params()
    suite = challenge_suite(bicliques, family, {0, 16}, params)
    assert suite[0] == frozenset()
    assert len(suite) == 1 + params.challenge_count + 1
    assert all(len(c) == 16 for c in suite[1:-1])
    assert suite[-1] == frozenset({0, 16})
    assert suite == challenge_suite(bicliques, family, {0, 16}, params)


def test_challenge_suite_enumerates_small_budgets(bicliques, family):
    """Test the exhaustive part when Λk ≤ 6"""
    params = desk_params(**{"lambda": "1/2"})
    suite = challenge_suite(bicliques, family, {0}, params)
    assert len(suite) == 1 + params.challenge_count + 1 + 1820


def test_small_graph_is_its_own_challenge(family):
    """Test that V(G) joins the suite when |V(G)| ≤ Λk"""
    g = Graph(32, [])
    params = desk_params(**{"lambda": 4})
    assert g.vertices in challenge_suite(g, family, set(), params)


def test_shrink_to_avoiding(bicliques, family):
    """Test that shrinking leaves a set every challenge accepts"""
    params = desk_params()
    candidate = {0, 1, 2, 16, 17, 18}
    avoiding, removed = shrink_to_avoiding(bicliques, family, candidate, params)
    assert avoiding | removed == frozenset(candidate)
    assert not avoiding & removed
    worst, _ = worst_exceptional(
        family, avoiding, challenge_suite(bicliques, family, avoiding, params), params.gamma, params.k
    )
    assert worst <= params.eps * params.k


def test_shrink_keeps_small_sets(bicliques, family):
    """Test that at most εk vertices can never be over the limit"""
    avoiding, removed = shrink_to_avoiding(bicliques, family, {0, 16}, desk_params())
    assert avoiding == frozenset({0, 16})
    assert removed == frozenset()


def test_worst_exceptional_reports_index(family):
    """Test the worst challenge lookup"""
    assert worst_exceptional(family, {0, 1}, [set(), {0}], QUARTER, 8) == (2, 1)
    assert worst_exceptional(family, {0, 1}, [set()], QUARTER, 8) == (0, -1)
