#!/usr/bin/env python3
"""
Degree Gap
Edge-deletion procedures that open a multiplicative gap [Ω_i·k, Ω_{i+1}·k) in the
degree sequence, in a generic form and in an LKS-preserving form.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..exceptions import InputError, InvariantViolation, PreconditionError
from ..utils.config import LksParams, OmegaSequence
from .graph_core import Edge, Graph, normalize_edge
from .lks_class import in_edge_bound_regime, is_lks_min, lks_small_properties

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GapResult:
    """G' together with the gap index i* and the deleted edges."""

    subgraph: Graph
    star_index: int
    removed_edges: tuple[Edge, ...]
    lower: Fraction
    upper: Fraction
    variant: str
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def has_gap(self) -> bool:
        return not gap_violations(self.subgraph, self.lower, self.upper)

    def to_dict(self) -> dict[str, Any]:
        return {
            "graph": self.subgraph.to_dict(),
            "star_index": self.star_index,
            "removed_edges": [list(e) for e in self.removed_edges],
            "gap": [str(self.lower), str(self.upper)],
            "variant": self.variant,
            "diagnostics": self.diagnostics,
        }


def gap_violations(g: Graph, lower: Fraction, upper: Fraction) -> list[int]:
    """Vertices whose degree lies in [lower, upper)."""
    return sorted(v for v in g.vertices if lower <= g.degree(v) < upper)


class _EdgeDeleter:
    """Mutable working copy of a graph that records deletions."""

    def __init__(self, g: Graph):
        self.graph = g
        self.adj: dict[int, set[int]] = {v: set(g.neighbors(v)) for v in g.vertices}
        self.removed: list[Edge] = []

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def delete(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.removed.append(normalize_edge(u, v))

    def delete_all_at(self, vertices: Iterable[int]) -> None:
        for v in sorted(vertices):
            for u in sorted(self.adj[v]):
                self.delete(v, u)

    def edges(self) -> list[Edge]:
        return sorted({normalize_edge(u, v) for u in self.adj for v in self.adj[u]})

    def result(self) -> Graph:
        return self.graph.spanning(self.edges())


def choose_star_index(g: Graph, k: int, omegas: OmegaSequence, r: int) -> int:
    """Index i* in [1, r] minimizing the degree mass of X_{i*} ∪ X_{i*+1} (smallest on ties)."""
    sums: dict[int, int] = defaultdict(int)
    for v in g.vertices:
        b = min(omegas.bucket(g.degree(v), k), r + 1)
        if b >= 1:
            sums[b] += g.degree(v)
    top = max(sums, default=0)
    limit = max(1, min(r, top + 1))
    return min(range(1, limit + 1), key=lambda i: (sums[i] + sums[i + 1], i))


def _gap_targets(g: Graph, k: int, omegas: OmegaSequence, r: int, star: int) -> list[int]:
    return [v for v in g.vertices if min(omegas.bucket(g.degree(v), k), r + 1) in (star, star + 1)]


def create_gap_generic(g: Graph, k: int, eta: Fraction, omegas: OmegaSequence) -> GapResult:
    if not 0 < eta < 1:
        raise InputError(f"eta must lie in (0,1), got {eta}")
    r = math.floor(4 / eta)
    if len(omegas) < r + 1:
        raise InputError(f"omega sequence needs at least {r + 1} entries, has {len(omegas)}")
    if omegas.max_ratio() > eta / 2:
        raise InputError(f"omega ratio {omegas.max_ratio()} exceeds eta/2 = {eta / 2}")

    star = choose_star_index(g, k, omegas, r)
    lower, upper = omegas.value(star) * k, omegas.value(star + 1) * k
    work = _EdgeDeleter(g)
    work.delete_all_at(_gap_targets(g, k, omegas, r, star))
    initial = len(work.removed)

    pending = sorted(v for v in g.vertices if lower <= work.degree(v) < upper)
    while pending:
        v = pending.pop(0)
        if not lower <= work.degree(v) < upper:
            continue
        neighbours = sorted(work.adj[v])
        work.delete_all_at([v])
        for u in neighbours:
            if lower <= work.degree(u) < upper and u not in pending:
                pending.append(u)
        pending.sort()

    result = GapResult(
        subgraph=work.result(),
        star_index=star,
        removed_edges=tuple(work.removed),
        lower=lower,
        upper=upper,
        variant="generic",
        diagnostics={"initial_removals": initial, "loss_bound": str(eta * k * g.order)},
    )
    logger.info(f"Generic gap at i*={star}: removed {len(work.removed)} edges")
    return result


def _least_incident_edge(work: _EdgeDeleter, v: int) -> Edge:
    return min(normalize_edge(v, u) for u in work.adj[v])


def create_gap_lks(g: Graph, p: LksParams, omegas: OmegaSequence) -> GapResult:
    """Gap creation that keeps the graph in LKSsmall(n, k, η/2).

    After the initial deletion of E_0, two rules alternate: (T1) while a vertex
    sits in the gap band, drop its least incident edge; (T2) drop the least edge
    joining a small vertex (w.r.t. η/2) to a vertex above the band. A final
    cleanup removes edges from small vertices to vertices whose degree is not
    exactly ⌈(1+η/2)k⌉.
    """
    eta, k = p.eta, p.k
    if eta <= 0:
        raise PreconditionError("eta", "the LKS gap procedure needs eta > 0")
    r = math.floor(100 / eta**2)
    if len(omegas) < r + 2:
        raise PreconditionError("omega_length", f"needs at least {r + 2} entries, has {len(omegas)}")
    if omegas.value(1) <= 2:
        raise PreconditionError("omega_first", f"Omega_1 must exceed 2, got {omegas.value(1)}")
    if omegas.max_ratio() > eta**2 / 100:
        raise PreconditionError("omega_ratio", f"ratio {omegas.max_ratio()} exceeds eta^2/100")
    if not is_lks_min(g, p):
        raise PreconditionError("is_lks_min", "input graph is not edge-minimal in LKS(n,k,eta)")

    star = choose_star_index(g, k, omegas, r)
    lower, upper = omegas.value(star) * k, omegas.value(star + 1) * k
    half_threshold = (1 + eta / 2) * k
    work = _EdgeDeleter(g)
    work.delete_all_at(_gap_targets(g, k, omegas, r, star))
    e0 = len(work.removed)

    t1 = t2 = 0
    while True:
        band = [v for v in sorted(work.adj) if lower <= work.degree(v) < upper]
        if band:
            work.delete(*_least_incident_edge(work, band[0]))
            t1 += 1
            continue
        small = {v for v in work.adj if work.degree(v) < half_threshold}
        high = {v for v in work.adj if work.degree(v) >= upper}
        crossing = [
            (u, v)
            for u, v in work.edges()
            if (u in small and v in high) or (v in small and u in high)
        ]
        if not crossing:
            break
        work.delete(*crossing[0])
        t2 += 1

    exact = math.ceil(half_threshold)
    small = {v for v in work.adj if work.degree(v) < half_threshold}
    cleanup = 0
    changed = True
    while changed:
        changed = False
        for u, v in work.edges():
            if v not in work.adj[u]:
                continue
            if (u in small and work.degree(v) != exact) or (v in small and work.degree(u) != exact):
                work.delete(u, v)
                cleanup += 1
                changed = True

    subgraph = work.result()
    properties = lks_small_properties(subgraph, p.halved())
    regime = in_edge_bound_regime(g.order, p)
    lks_small = all(properties.values())
    result = GapResult(
        subgraph=subgraph,
        star_index=star,
        removed_edges=tuple(work.removed),
        lower=lower,
        upper=upper,
        variant="lks",
        diagnostics={
            "e0": e0,
            "t1": t1,
            "t2": t2,
            "cleanup": cleanup,
            "in_regime": regime,
            "lks_small": lks_small,
            "lks_small_properties": properties,
        },
    )
    if not lks_small:
        if regime:
            raise InvariantViolation(f"gap output left LKSsmall inside the guaranteed regime: {properties}")
        logger.warning(f"Gap output not in LKSsmall outside the guaranteed regime: {properties}")
    logger.info(f"LKS gap at i*={star}: E0={e0}, T1={t1}, T2={t2}, cleanup={cleanup}")
    return result
