#!/usr/bin/env python3
"""
LKS Classes
Membership tests and normalization for LKS(n,k,η), LKSmin and LKSsmall graphs.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..exceptions import PreconditionError
from ..utils.config import LksParams
from .graph_core import Graph, VertexSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegreeSplit:
    """S_{η,k}(G) (degree below (1+η)k) and L_{η,k}(G) (the rest)."""

    small: VertexSet
    large: VertexSet

    def to_dict(self) -> dict[str, list[int]]:
        return {"small": sorted(self.small), "large": sorted(self.large)}


def degree_split(g: Graph, p: LksParams) -> DegreeSplit:
    threshold = p.threshold
    large = frozenset(v for v in g.vertices if g.degree(v) >= threshold)
    return DegreeSplit(small=g.vertices - large, large=large)


def _enough_large(count: int, n: int, p: LksParams) -> bool:
    return count >= (Fraction(1, 2) + p.eta) * n


def is_lks(g: Graph, p: LksParams) -> bool:
    """At least (1/2+η)n vertices of degree at least (1+η)k."""
    return _enough_large(len(degree_split(g, p).large), g.order, p)


def _removal_keeps_membership(g: Graph, p: LksParams, large_count: int, u: int, v: int) -> bool:
    threshold = p.threshold
    lost = sum(1 for x in (u, v) if g.degree(x) >= threshold > g.degree(x) - 1)
    return _enough_large(large_count - lost, g.order, p)


def is_lks_min(g: Graph, p: LksParams) -> bool:
    """Member of LKS whose every single-edge deletion leaves the class."""
    large_count = len(degree_split(g, p).large)
    if not _enough_large(large_count, g.order, p):
        return False
    return not any(_removal_keeps_membership(g, p, large_count, u, v) for u, v in g.edges)


def minimize_to_lks_min(g: Graph, p: LksParams) -> Graph:
    """Delete edges in lexicographic order while membership survives.

    One pass suffices: membership is monotone under edge addition, so an edge that
    could not be removed earlier can never become removable later.
    """
    if not is_lks(g, p):
        raise PreconditionError("is_lks", "input graph is not in LKS(n,k,eta)")
    threshold = p.threshold
    degree = {v: g.degree(v) for v in g.vertices}
    large_count = sum(1 for d in degree.values() if d >= threshold)
    kept = []
    for u, v in g.edges:
        lost = sum(1 for x in (u, v) if degree[x] >= threshold > degree[x] - 1)
        if _enough_large(large_count - lost, g.order, p):
            degree[u] -= 1
            degree[v] -= 1
            large_count -= lost
        else:
            kept.append((u, v))
    result = g.spanning(kept)
    logger.debug(f"LKSmin normalization removed {g.e - result.e} of {g.e} edges")
    return result


def is_lks_small(g: Graph, p: LksParams) -> bool:
    return all(lks_small_properties(g, p).values())


def lks_small_properties(g: Graph, p: LksParams) -> dict[str, bool]:
    """Membership plus the three cleaned-class properties, each reported separately."""
    split = degree_split(g, p)
    cap = math.ceil((1 + 2 * p.eta) * p.k)
    exact = math.ceil(p.threshold)
    return {
        "in_lks": _enough_large(len(split.large), g.order, p),
        "high_degree_neighbours_bounded": all(
            g.degree(u) <= cap for v in g.vertices if g.degree(v) > cap for u in g.neighbors(v)
        ),
        "small_neighbours_exact": all(
            g.degree(u) == exact for v in split.small for u in g.neighbors(v)
        ),
        "edge_bound": g.e <= p.k * g.order,
    }


def in_edge_bound_regime(n: int, p: LksParams) -> bool:
    """The regime η < 1/20, n > k > 20 where e(G) < kn is guaranteed for LKSmin graphs."""
    return p.eta < Fraction(1, 20) and n > p.k > 20


def check_lksmin_facts(g: Graph, p: LksParams, require_minimal: bool = True) -> dict[str, Any]:
    """Evaluate the structural facts of edge-minimal LKS graphs clause by clause.

    ``require_minimal=False`` lets callers evaluate hand-built violators.
    """
    if require_minimal and not is_lks_min(g, p):
        raise PreconditionError("is_lks_min", "input graph is not edge-minimal in LKS(n,k,eta)")
    split = degree_split(g, p)
    n = g.order
    exact = math.ceil(p.threshold)
    large_cap = math.ceil((Fraction(1, 2) + p.eta) * n) + 1
    s_edges = [(u, v) for u, v in g.edges if u in split.small and v in split.small]
    bad_neighbours = sorted(
        {u for v in g.vertices if g.degree(v) > exact for u in g.neighbors(v) if g.degree(u) != exact}
    )
    regime = in_edge_bound_regime(n, p)
    clauses = {
        "s_independent": not s_edges,
        "large_neighbours_exact": not bad_neighbours,
        "few_large": len(split.large) <= large_cap,
        "edge_bound": g.e < p.k * n,
    }
    if not regime and not clauses["edge_bound"]:
        logger.info("Edge bound e < kn fails outside the eta<1/20, n>k>20 regime (reported only)")
    return {
        "clauses": clauses,
        "counts": {
            "n": n,
            "e": g.e,
            "kn": p.k * n,
            "small": len(split.small),
            "large": len(split.large),
            "large_cap": large_cap,
            "edges_inside_small": len(s_edges),
            "bad_neighbours": len(bad_neighbours),
            "edge_bound_product": exact * large_cap,
        },
        "in_regime": regime,
    }
