#!/usr/bin/env python3
"""
Tests for the clause-by-clause decomposition verifiers
"""

import logging
from dataclasses import replace
from fractions import Fraction

import pytest

from sparsedecomp.tools.decomposition import SparseDecomposition, decompose_bounded, decompose_generic
from sparsedecomp.tools.graph_core import Graph
from sparsedecomp.tools.verification import (
    BoundedDecompositionVerifier,
    check_avoiding_monotone,
    verify_bounded,
    verify_sparse,
)
from sparsedecomp.utils.config import OmegaSequence

logger = logging.getLogger(__name__)

BOUNDED_CLAUSES = {
    "1_expander",
    "2_clusters_disjoint",
    "3_regular_pairs",
    "4_cluster_sizes",
    "5_spots",
    "6_pairs_in_spots",
    "7_granularity",
    "8_avoiding",
    "threshold_b",
}


@pytest.fixture
def decomposition(bicliques, params):
    return decompose_bounded(bicliques, None, params).decomposition


def test_valid_decomposition_passes_every_clause(bicliques, decomposition, params):
    """Test the bounded verifier on a computed decomposition"""
    report = verify_bounded(bicliques, decomposition, params)
    assert set(report["clauses"]) == BOUNDED_CLAUSES
    assert report["summary"]["all_passed"]
    assert report["summary"]["kind"] == "bounded"
    assert report["clauses"]["8_avoiding"]["measured"]["worst_exceptional"] == 0


def test_edgeless_decomposition_passes(params):
    """Test the verifier on the empty decomposition of an edgeless graph"""
    g = Graph(10)
    d = decompose_bounded(g, None, params).decomposition
    assert verify_bounded(g, d, params)["summary"]["all_passed"]


def test_foreign_reg_edge_is_reported(bicliques, decomposition, params):
    """Test that a G_reg edge missing from G breaks the regular-pair clause"""
    g_reg = decomposition.g_reg
    broken = replace(decomposition, g_reg=Graph(g_reg.n, g_reg.edges + ((0, 1),), g_reg.vertices))
    report = verify_bounded(bicliques, broken, params)
    assert not report["summary"]["all_passed"]
    clause = report["clauses"]["3_regular_pairs"]
    assert not clause["passed"]
    assert clause["issues"]


def test_overlapping_clusters_are_reported(bicliques, decomposition, params):
    """Test cluster disjointness and size clauses"""
    clusters = decomposition.clusters + (frozenset({0, 1, 2, 3}),)
    report = verify_bounded(bicliques, replace(decomposition, clusters=clusters), params)
    assert not report["clauses"]["2_clusters_disjoint"]["passed"]
    assert not report["clauses"]["4_cluster_sizes"]["passed"]


def test_avoiding_clash_with_clusters(bicliques, decomposition, params):
    """Test that avoiding vertices inside clusters fail the avoiding clause"""
    report = verify_bounded(bicliques, replace(decomposition, avoiding=frozenset({0})), params)
    assert not report["clauses"]["8_avoiding"]["passed"]


def test_user_challenges_are_checked(bicliques, decomposition, params):
    """Test that supplied challenges join the suite and oversized ones are skipped"""
    verifier = BoundedDecompositionVerifier(bicliques, decomposition, params, [set(), set(range(20))])
    result = verifier.verify_avoiding()
    assert result.passed
    assert result.measured["skipped_oversized"] == 1


def test_sparse_verifier(bicliques, params):
    """Test the sparse verifier on a generic-wrapper run"""
    omegas = OmegaSequence.geometric(Fraction(3), Fraction(1, 8), 9)
    run = decompose_generic(bicliques, Fraction(1, 2), omegas, params)
    s = run.decomposition
    report = verify_sparse(run.graph, s, run.params, [], s.bounded.prepartition)
    assert report["summary"]["all_passed"]
    assert report["summary"]["kind"] == "sparse"
    assert {"huge_min_degree", "aux_max_degree", "fact_dichotomy"} <= set(report["clauses"])
    assert "bounded.8_avoiding" in report["clauses"]


def test_sparse_verifier_flags_light_huge_vertex(bicliques, decomposition, params):
    """Test that a huge vertex below Ω**·k is reported"""
    padded = Graph(33, bicliques.edges)
    s = SparseDecomposition(frozenset({32}), decomposition)
    report = verify_sparse(padded, s, params)
    assert not report["clauses"]["huge_min_degree"]["passed"]


def test_avoiding_monotone(decomposition, params):
    """Test monotonicity under vertex removal from the avoiding set"""
    d = replace(decomposition, avoiding=frozenset())
    assert check_avoiding_monotone(d, params, [set(), {0}])
