#!/usr/bin/env python3
"""
Decomposition Verifier
Clause-by-clause checks of bounded and sparse decompositions against a graph.
"""

import itertools
import logging
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Any

from ..exceptions import ExactCapExceeded, InputError
from ..utils.config import DecompParams
from .avoiding import challenge_suite, exceptional_vertices
from .decomposition import BoundedDecomposition, SparseDecomposition, captured_edges
from .dense_spots import certify_nowhere_dense, is_dense_spot
from .graph_core import Graph, Partition, VertexSet
from .regularity import PairOracle
from .reports import ClauseResult, generate_report

logger = logging.getLogger(__name__)

_MAX_LISTED = 10


def _listed(issues: list[str]) -> list[str]:
    if len(issues) <= _MAX_LISTED:
        return issues
    return issues[:_MAX_LISTED] + [f"... and {len(issues) - _MAX_LISTED} more"]


class BoundedDecompositionVerifier:
    """Checks the eight defining clauses of a bounded decomposition plus the threshold-b dichotomy."""

    def __init__(
        self,
        g: Graph,
        d: BoundedDecomposition,
        params: DecompParams,
        challenges: Sequence[Iterable[int]] = (),
        prepartition: Partition | None = None,
    ):
        self.g = g
        self.d = d
        self.params = params
        self.challenges = [frozenset(c) for c in challenges]
        self.prepartition = prepartition or d.prepartition or Partition.trivial(g.vertices)
        self.owner = {v: i for i, c in enumerate(d.clusters) for v in c}
        self.oracle = PairOracle(g, params.eps, None, params.regularity)

    def verify_expander(self) -> ClauseResult:
        """G_exp is a (γk,γ)-nowhere-dense subgraph of G with mindeg > ρk."""
        issues = []
        g_exp, p = self.d.g_exp, self.params
        stray = [e for e in g_exp.edges if not self.g.has_edge(*e)]
        if stray:
            issues.append(f"G_exp uses {len(stray)} non-edges of G, e.g. {list(stray[0])}")
        if not g_exp.vertices <= self.g.vertices:
            issues.append("G_exp has vertices outside V(G)")
        mindeg = g_exp.mindeg() if g_exp.order else None
        if mindeg is not None and mindeg <= p.rho * p.k:
            issues.append(f"mindeg(G_exp) = {mindeg} is not above rho*k = {p.rho * p.k}")
        try:
            nowhere, mode = certify_nowhere_dense(g_exp, p.gamma * p.k, p.gamma, p.finder)
        except ExactCapExceeded as e:
            nowhere, mode = False, "exact"
            issues.append(str(e))
        if not nowhere:
            issues.append(f"G_exp contains a dense spot ({mode} finder)")
        return ClauseResult(not issues, {"vertices": g_exp.order, "mindeg": mindeg, "mode": mode}, issues)

    def verify_clusters_disjoint(self) -> ClauseResult:
        issues = []
        seen: set[int] = set()
        for i, c in enumerate(self.d.clusters):
            if seen & c:
                issues.append(f"cluster {i} overlaps an earlier cluster")
            if not c <= self.g.vertices:
                issues.append(f"cluster {i} leaves V(G)")
            seen |= c
        return ClauseResult(not issues, {"clusters": len(self.d.clusters)}, _listed(issues))

    def verify_regular_pairs(self) -> ClauseResult:
        """G_reg sits on ⋃𝐕 inside G - G_exp and fills ε-regular pairs of density ≥ γ² completely."""
        issues = []
        g_reg, clusters = self.d.g_reg, self.d.clusters
        if g_reg.vertices != self.d.cluster_vertices:
            issues.append("V(G_reg) differs from the union of the clusters")
        pairs: set[tuple[int, int]] = set()
        for x, y in g_reg.edges:
            if not self.g.has_edge(x, y) or self.d.g_exp.has_edge(x, y):
                issues.append(f"G_reg edge ({x}, {y}) is not an edge of G - G_exp")
                continue
            cx, cy = self.owner.get(x), self.owner.get(y)
            if cx is None or cy is None or cx == cy:
                issues.append(f"G_reg edge ({x}, {y}) does not join two distinct clusters")
                continue
            pairs.add((min(cx, cy), max(cx, cy)))
        advisory = False
        gamma_sq = self.params.gamma**2
        for a, b in sorted(pairs):
            ca, cb = clusters[a], clusters[b]
            host = self.g.edges_between(ca, cb)
            if len(host) != len(g_reg.edges_between(ca, cb)):
                issues.append(f"G_reg misses edges of G between clusters {a} and {b}")
            if Fraction(len(host), len(ca) * len(cb)) < gamma_sq:
                issues.append(f"clusters {a}, {b} have density below gamma^2")
            verdict = self.oracle.check(ca, cb)
            advisory = advisory or not verdict.exact
            if not verdict.regular:
                issues.append(f"clusters {a}, {b} are not eps-regular")
        measured = {"edges": g_reg.e, "cluster_pairs": len(pairs), "advisory": advisory}
        return ClauseResult(not issues, measured, _listed(issues))

    def verify_cluster_sizes(self) -> ClauseResult:
        p = self.params
        sizes = sorted({len(c) for c in self.d.clusters})
        issues = []
        if len(sizes) > 1:
            issues.append(f"clusters have different sizes {sizes}")
        low, high = p.nu * p.k, p.eps * p.k
        issues.extend(f"cluster size {s} outside [{low}, {high}]" for s in sizes if not low <= s <= high)
        return ClauseResult(not issues, {"sizes": sizes, "window": [str(low), str(high)]}, issues)

    def verify_spots(self) -> ClauseResult:
        """Edge-disjoint (γk,γ)-dense spots of G - G_exp whose G[U,W] edges are all covered."""
        issues = []
        p = self.params
        spots = self.d.spots
        host = self.g.remove_edges(e for e in self.d.g_exp.edges if self.g.has_edge(*e))
        covered = set(spots.captured_graph.edges)
        seen: set[tuple[int, int]] = set()
        for i, spot in enumerate(spots.spots):
            if seen & spot.f:
                issues.append(f"spot {i} shares edges with an earlier spot")
            seen |= spot.f
            try:
                if not is_dense_spot(host, spot, p.gamma * p.k, p.gamma):
                    issues.append(f"spot {i} is not (gamma*k, gamma)-dense")
            except InputError as e:
                issues.append(f"spot {i}: {e}")
            uncovered = [e for e in self.g.edges_between(spot.u, spot.w) if e not in covered]
            if uncovered:
                issues.append(f"spot {i}: {len(uncovered)} edges of G[U,W] are not covered by the family")
        return ClauseResult(not issues, {"spots": len(spots)}, _listed(issues))

    def verify_pairs_in_spots(self) -> ClauseResult:
        issues = []
        clusters = self.d.clusters
        checked: set[tuple[int, int]] = set()
        for x, y in self.d.g_reg.edges:
            cx, cy = self.owner.get(x), self.owner.get(y)
            if cx is None or cy is None or cx == cy:
                continue
            key = (min(cx, cy), max(cx, cy))
            if key in checked:
                continue
            checked.add(key)
            c1, c2 = clusters[key[0]], clusters[key[1]]
            if not any(
                (c1 <= s.u and c2 <= s.w) or (c1 <= s.w and c2 <= s.u) for s in self.d.spots.spots
            ):
                issues.append(f"clusters {key[0]}, {key[1]} share no spot")
        return ClauseResult(not issues, {"cluster_pairs": len(checked)}, _listed(issues))

    def verify_granularity(self) -> ClauseResult:
        """Clusters sit inside one prepartition class, one side of V(G_exp), and whole spot sides."""
        issues = []
        expander = self.d.g_exp.vertices
        for i, c in enumerate(self.d.clusters):
            if not c <= self.prepartition.ground:
                issues.append(f"cluster {i} leaves the prepartition ground set")
                continue
            if len({self.prepartition.block_of(v) for v in c}) != 1:
                issues.append(f"cluster {i} spans several prepartition classes")
            if not (c <= expander or not c & expander):
                issues.append(f"cluster {i} is split by V(G_exp)")
            for j, spot in enumerate(self.d.spots.spots):
                if len(c & spot.u) not in (0, len(c)) or len(c & spot.w) not in (0, len(c)):
                    issues.append(f"cluster {i} is split by spot {j}")
        return ClauseResult(not issues, {"classes": len(self.prepartition)}, _listed(issues))

    def challenge_sets(self) -> list[VertexSet]:
        suite = challenge_suite(self.g, self.d.spots, self.d.avoiding, self.params)
        return self.challenges + suite

    def verify_avoiding(self) -> ClauseResult:
        """𝔼 avoids ⋃𝐕 and every challenge of size ≤ Λk leaves at most εk exceptional vertices."""
        issues = []
        p = self.params
        avoiding = self.d.avoiding
        clash = avoiding & self.d.cluster_vertices
        if clash:
            issues.append(f"{len(clash)} avoiding vertices lie in clusters")
        if not avoiding <= self.g.vertices:
            issues.append("avoiding set leaves V(G)")
        budget, limit = p.lambda_ * p.k, p.eps * p.k
        worst, skipped = 0, 0
        challenges = self.challenge_sets()
        for i, challenge in enumerate(challenges):
            if len(challenge) > budget:
                skipped += 1
                continue
            count = len(exceptional_vertices(self.d.spots, avoiding, challenge, p.gamma, p.k))
            worst = max(worst, count)
            if count > limit:
                issues.append(f"challenge {i} leaves {count} exceptional vertices (limit {limit})")
        measured = {
            "avoiding": len(avoiding),
            "challenges": len(challenges) - skipped,
            "skipped_oversized": skipped,
            "worst_exceptional": worst,
            "limit": str(limit),
        }
        return ClauseResult(not issues, measured, _listed(issues))

    def verify_threshold_b(self) -> ClauseResult:
        """Each cluster has all or none of its degrees into 𝔼 above b."""
        issues = []
        b, avoiding = self.params.b, self.d.avoiding
        for i, c in enumerate(self.d.clusters):
            degrees = [self.g.deg_into(v, avoiding) for v in c]
            if not (max(degrees) <= b or min(degrees) > b):
                issues.append(f"cluster {i} straddles the avoiding threshold")
        return ClauseResult(not issues, {"b": str(b)}, _listed(issues))

    def verify_all(self) -> dict[str, ClauseResult]:
        logger.info(f"Verifying bounded decomposition with {len(self.d.clusters)} clusters")
        return {
            "1_expander": self.verify_expander(),
            "2_clusters_disjoint": self.verify_clusters_disjoint(),
            "3_regular_pairs": self.verify_regular_pairs(),
            "4_cluster_sizes": self.verify_cluster_sizes(),
            "5_spots": self.verify_spots(),
            "6_pairs_in_spots": self.verify_pairs_in_spots(),
            "7_granularity": self.verify_granularity(),
            "8_avoiding": self.verify_avoiding(),
            "threshold_b": self.verify_threshold_b(),
        }

    def generate_report(self, results: dict[str, ClauseResult] | None = None) -> dict[str, Any]:
        results = results if results is not None else self.verify_all()
        return generate_report(results, kind="bounded", vertices=self.g.order, edges=self.g.e)


def verify_bounded(
    g: Graph,
    d: BoundedDecomposition,
    params: DecompParams,
    challenges: Sequence[Iterable[int]] = (),
    prepartition: Partition | None = None,
) -> dict[str, Any]:
    return BoundedDecompositionVerifier(g, d, params, challenges, prepartition).generate_report()


def _dichotomy(g: Graph, s: SparseDecomposition) -> ClauseResult:
    """Every G_𝒟 edge between two clusters is in G_reg or not captured at all."""
    captured = captured_edges(g, s)
    owner = {v: i for i, c in enumerate(s.bounded.clusters) for v in c}
    issues = [
        f"edge ({x}, {y}) is captured outside G_reg"
        for x, y in s.bounded.spots.captured_graph.edges
        if x in owner
        and y in owner
        and owner[x] != owner[y]
        and not s.bounded.g_reg.has_edge(x, y)
        and captured.has_edge(x, y)
    ]
    return ClauseResult(not issues, {"captured": captured.e}, _listed(issues))


def verify_sparse(
    g: Graph,
    s: SparseDecomposition,
    params: DecompParams,
    challenges: Sequence[Iterable[int]] = (),
    prepartition: Partition | None = None,
) -> dict[str, Any]:
    """Degree clauses on ℍ and the auxiliary graph, then the bounded clauses on G - ℍ."""
    k = params.k
    huge = s.huge
    results: dict[str, ClauseResult] = {}

    low = sorted(v for v in huge if g.degree(v) < params.omega_star2 * k)
    results["huge_min_degree"] = ClauseResult(
        not low,
        {"huge": len(huge), "threshold": str(params.omega_star2 * k)},
        _listed([f"vertex {v} in H has degree {g.degree(v)}" for v in low]),
    )

    aux_edges = set(s.bounded.spots.captured_graph.edges) | set(s.bounded.g_exp.edges)
    aux_edges |= {e for e in g.edges if e[0] in huge or e[1] in huge}
    aux = g.spanning(e for e in aux_edges if g.has_edge(*e))
    outside = g.vertices - huge
    aux_max = aux.maxdeg(outside) if outside else 0
    results["aux_max_degree"] = ClauseResult(
        aux_max <= params.omega_star * k, {"maxdeg": aux_max, "bound": str(params.omega_star * k)}
    )
    results["fact_dichotomy"] = _dichotomy(g, s)

    rest = g.remove_vertices(huge)
    zones = prepartition.restrict(rest.vertices) if prepartition is not None and rest.order else None
    bounded = BoundedDecompositionVerifier(rest, s.bounded, params, challenges, zones).verify_all()
    for name, result in bounded.items():
        results[f"bounded.{name}"] = result
    return generate_report(results, kind="sparse", vertices=g.order, edges=g.e, huge=len(huge))


def check_avoiding_monotone(
    d: BoundedDecomposition, params: DecompParams, challenges: Sequence[Iterable[int]], drop: int = 1
) -> bool:
    """Removing vertices from 𝔼 never creates avoiding-clause failures on fixed challenges."""
    fixed = [frozenset(c) for c in challenges]
    limit = params.eps * params.k

    def passes(avoiding: VertexSet) -> bool:
        return all(
            len(exceptional_vertices(d.spots, avoiding, c, params.gamma, params.k)) <= limit for c in fixed
        )

    if not passes(d.avoiding):
        return True
    return all(
        passes(d.avoiding - frozenset(removed))
        for removed in itertools.combinations(sorted(d.avoiding), min(drop, len(d.avoiding)))
    )
