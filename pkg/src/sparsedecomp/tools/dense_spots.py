#!/usr/bin/env python3
"""
Dense Spots
(m,γ)-dense spot certificates, an exhaustive finder for small cores, a peeling
heuristic for large ones, greedy edge-disjoint family extraction and the
thick-graph conversion.
"""

import heapq
import logging
import math
import random
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import networkx as nx

from ..exceptions import ExactCapExceeded, InputError
from ..utils.config import FinderConfig
from .graph_core import Edge, Graph, VertexSet, min_degree_subgraph, normalize_edge

logger = logging.getLogger(__name__)

Number = int | Fraction


@dataclass(frozen=True)
class DenseSpot:
    """Bipartite subgraph D = (U, W; F); spots carry no orientation."""

    u: VertexSet
    w: VertexSet
    f: frozenset[Edge]

    def __post_init__(self) -> None:
        if not self.f:
            raise InputError("dense spot must have at least one edge")
        if self.u & self.w:
            raise InputError("dense spot sides overlap")
        touched: set[int] = set()
        for a, b in self.f:
            if not ((a in self.u and b in self.w) or (a in self.w and b in self.u)):
                raise InputError(f"spot edge ({a}, {b}) does not cross the sides")
            touched.update((a, b))
        if touched != self.u | self.w:
            raise InputError("every spot vertex needs an incident spot edge")

    @classmethod
    def from_sides(cls, g: Graph, u: Iterable[int], w: Iterable[int]) -> "DenseSpot":
        """Spot taking every edge of G between U and W."""
        us, ws = frozenset(u), frozenset(w)
        return cls(us, ws, frozenset(g.edges_between(us, ws)))

    @property
    def vertices(self) -> VertexSet:
        return self.u | self.w

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.f), len(self.u) * len(self.w))

    def degrees(self) -> dict[int, int]:
        deg = dict.fromkeys(self.vertices, 0)
        for a, b in self.f:
            deg[a] += 1
            deg[b] += 1
        return deg

    @property
    def min_degree(self) -> int:
        return min(self.degrees().values())

    def to_dict(self) -> dict[str, Any]:
        return {"u": sorted(self.u), "w": sorted(self.w), "f": [list(e) for e in sorted(self.f)]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DenseSpot":
        try:
            return cls(
                frozenset(data["u"]),
                frozenset(data["w"]),
                frozenset(normalize_edge(int(a), int(b)) for a, b in data["f"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InputError):
                raise
            raise InputError(f"malformed dense spot: {e}") from e


@dataclass(frozen=True)
class SpotFamily:
    """Edge-disjoint spots 𝒟 and the graph G_𝒟 they span."""

    spots: tuple[DenseSpot, ...]
    captured_graph: Graph
    _membership: dict[int, tuple[int, ...]] = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_spots(cls, n: int, spots: Iterable[DenseSpot]) -> "SpotFamily":
        chosen = tuple(spots)
        seen: set[Edge] = set()
        for spot in chosen:
            if seen & spot.f:
                raise InputError("spots of a family must be edge-disjoint")
            seen |= spot.f
        vertices = {v for spot in chosen for v in spot.vertices}
        membership: dict[int, list[int]] = {}
        for i, spot in enumerate(chosen):
            for v in spot.vertices:
                membership.setdefault(v, []).append(i)
        return cls(
            chosen,
            Graph(n, sorted(seen), vertices),
            {v: tuple(ids) for v, ids in membership.items()},
        )

    def containing(self, v: int) -> tuple[int, ...]:
        """Indices of spots whose vertex set contains v."""
        return self._membership.get(v, ())

    def __len__(self) -> int:
        return len(self.spots)

    def to_dict(self) -> dict[str, Any]:
        return {"spots": [spot.to_dict() for spot in self.spots]}

    @classmethod
    def from_dict(cls, n: int, data: dict[str, Any]) -> "SpotFamily":
        return cls.from_spots(n, (DenseSpot.from_dict(s) for s in data.get("spots", [])))


@dataclass(frozen=True)
class ThickGraph:
    """A vertex set spanning at least d·v² edges on at least ℓ vertices."""

    vertices: VertexSet
    d: Fraction
    ell: int


def is_thick(g: Graph, vertices: Iterable[int], d: Number, ell: Number) -> bool:
    members = g.check_subset(vertices)
    return len(members) >= ell and g.induced(members).e >= d * len(members) ** 2


def thick_region(g: Graph, vertices: Iterable[int], m: Number, gamma: Number) -> ThickGraph | None:
    """The vertex set as a (4m, 4γ)-thick graph, whose degraded spot would be (m, γ)-dense."""
    if Fraction(gamma) <= 0:
        return None
    d, ell = 4 * Fraction(gamma), 4 * Fraction(m)
    members = frozenset(vertices)
    if not is_thick(g, members, d, ell):
        return None
    return ThickGraph(members, d, math.ceil(ell))


def is_dense_spot(g: Graph, cand: DenseSpot, m: Number, gamma: Number) -> bool:
    missing = [e for e in cand.f if not g.has_edge(*e)]
    if missing:
        raise InputError(f"candidate spot uses non-edges, e.g. {list(missing[0])}")
    return cand.density > gamma and cand.min_degree > m


def _core_threshold(m: Number) -> int:
    return math.floor(m) + 1


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _exact_search(g: Graph, m: Number, gamma: Number, first_only: bool) -> DenseSpot | None:
    """Exhaustive assignment of every vertex to U, W or neither, with degree pruning."""
    core_set = g.vertices
    order = sorted(core_set, key=lambda v: (-g.degree(v), v))
    pos = {v: i for i, v in enumerate(order)}
    nbr = [sum(1 << pos[u] for u in g.neighbors(v)) for v in order]
    size = len(order)
    best: dict[str, Any] = {"edges": -1, "sides": None}

    def feasible(mu: int, mw: int, free: int) -> bool:
        for i in _bits(mu):
            if (nbr[i] & (mw | free)).bit_count() <= m:
                return False
        for i in _bits(mw):
            if (nbr[i] & (mu | free)).bit_count() <= m:
                return False
        return True

    def leaf(mu: int, mw: int) -> bool:
        if not mu or not mw:
            return False
        edges = sum((nbr[i] & mw).bit_count() for i in _bits(mu))
        if edges <= gamma * mu.bit_count() * mw.bit_count():
            return False
        if edges > best["edges"]:
            best["edges"], best["sides"] = edges, (mu, mw)
        return True

    def rec(i: int, mu: int, mw: int) -> bool:
        if i == size:
            return leaf(mu, mw) and first_only
        bit = 1 << i
        free = ((1 << size) - 1) & ~((bit << 1) - 1)
        options = [(mu | bit, mw)]
        if mu:
            options.append((mu, mw | bit))
        options.append((mu, mw))
        for nu, nw in options:
            if feasible(nu, nw, free) and rec(i + 1, nu, nw):
                return True
        return False

    rec(0, 0, 0)
    if best["sides"] is None:
        return None
    mu, mw = best["sides"]
    return DenseSpot.from_sides(g, (order[i] for i in _bits(mu)), (order[i] for i in _bits(mw)))


def _peel_to_spot(g: Graph, u: Iterable[int], w: Iterable[int], m: Number, gamma: Number) -> DenseSpot | None:
    """Peel a bipartition towards a spot.

    Vertices with crossing degree ≤ m are removed until none remain; while the
    density is still ≤ γ the minimum-degree vertex is dropped and peeling resumes.
    """
    side = dict.fromkeys(u, 0)
    side.update(dict.fromkeys(w, 1))
    deg = {v: sum(1 for x in g.neighbors(v) if x in side and side[x] != side[v]) for v in side}
    alive = set(side)
    counts = [sum(1 for v in side if side[v] == 0), sum(1 for v in side if side[v] == 1)]
    edges = sum(deg[v] for v in side if side[v] == 0)
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)

    def remove(v: int) -> int:
        alive.discard(v)
        counts[side[v]] -= 1
        for x in g.neighbors(v):
            if x in alive and side[x] != side[v]:
                deg[x] -= 1
                heapq.heappush(heap, (deg[x], x))
        return deg[v]

    while True:
        while heap and (heap[0][1] not in alive or heap[0][0] != deg[heap[0][1]]):
            heapq.heappop(heap)
        if not heap or not counts[0] or not counts[1]:
            return None
        d, v = heap[0]
        if d > m and edges > gamma * counts[0] * counts[1]:
            us = [x for x in alive if side[x] == 0]
            ws = [x for x in alive if side[x] == 1]
            return DenseSpot.from_sides(g.induced(alive), us, ws)
        heapq.heappop(heap)
        edges -= remove(v)


def _local_maxcut(g: Graph, region: list[int], start: dict[int, int], passes: int = 50) -> dict[int, int]:
    side = dict(start)
    for _ in range(passes):
        improved = False
        for v in region:
            same = other = 0
            for x in g.neighbors(v):
                if x in side:
                    if side[x] == side[v]:
                        same += 1
                    else:
                        other += 1
            if same > other:
                side[v] ^= 1
                improved = True
        if not improved:
            break
    return side


def _bfs_coloring(g: Graph, region: list[int]) -> dict[int, int]:
    sub = g.induced(region).to_networkx()
    side: dict[int, int] = {}
    for root in region:
        if root in side:
            continue
        side[root] = 0
        for parent, child in nx.bfs_edges(sub, root):
            side[child] = 1 - side[parent]
    return side


def _bipartitions(g: Graph, region: list[int], rng: random.Random, restarts: int) -> list[dict[int, int]]:
    starts = [_bfs_coloring(g, region)]
    starts.extend({v: rng.randrange(2) for v in region} for _ in range(restarts - 1))
    return [_local_maxcut(g, region, s) for s in starts]


def _regions(core: Graph, config: FinderConfig) -> list[list[int]]:
    regions: list[list[int]] = []
    seen: set[frozenset[int]] = set()
    for comp in sorted(nx.connected_components(core.to_networkx()), key=min):
        key = frozenset(comp)
        if key not in seen:
            seen.add(key)
            regions.append(sorted(comp))
    hubs = sorted(core.vertices, key=lambda v: (-core.degree(v), v))[: config.max_seeds]
    for hub in hubs:
        ball = {hub} | set(core.neighbors(hub))
        ball |= {x for y in core.neighbors(hub) for x in core.neighbors(y)}
        key = frozenset(ball)
        if key not in seen:
            seen.add(key)
            regions.append(sorted(ball))
    return regions


def _heuristic_search(core: Graph, m: Number, gamma: Number, config: FinderConfig) -> DenseSpot | None:
    """Peel max-cut bipartitions of each region; thick regions go through the factor-4 degradation."""
    rng = random.Random(config.seed)
    best: DenseSpot | None = None
    for region in _regions(core, config):
        sub = core.induced(region)
        candidates: list[DenseSpot | None] = []
        sides = _bipartitions(sub, region, rng, config.restarts)
        thick = thick_region(sub, region, m, gamma)
        if thick is not None:
            # the BFS max-cut start is exactly the cut thick_to_spot takes
            candidates.append(thick_to_spot(sub, thick.vertices, thick.d, Fraction(m) / Fraction(gamma)))
            sides = sides[1:]
        for side in sides:
            u = [v for v in region if side[v] == 0]
            w = [v for v in region if side[v] == 1]
            candidates.append(_peel_to_spot(sub, u, w, m, gamma))
        for spot in candidates:
            if spot is not None and (best is None or len(spot.f) > len(best.f)):
                best = spot
    return best


def finder_mode(core_size: int, exact: bool | None, config: FinderConfig) -> str:
    """Resolve which finder runs on a core of the given size."""
    wanted = {True: "exact", False: "heuristic", None: config.mode}[exact]
    if wanted == "auto":
        return "exact" if core_size <= min(config.exact_cap, config.auto_exact_limit) else "heuristic"
    if wanted == "exact" and core_size > config.exact_cap:
        raise ExactCapExceeded(
            f"exact spot search over {core_size} candidate vertices exceeds the cap {config.exact_cap}"
        )
    return wanted


def find_dense_spot(
    g: Graph,
    m: Number,
    gamma: Number,
    exact: bool | None = None,
    config: FinderConfig | None = None,
    first_only: bool = False,
) -> DenseSpot | None:
    """Return an (m,γ)-dense spot of g, or None.

    Only the (⌊m⌋+1)-core can host a spot, so the exact cap applies to the core.
    The exact search returns a spot with the most edges (or the first one found
    when ``first_only``); the heuristic is sound but may miss spots.
    """
    config = config or FinderConfig()
    core = min_degree_subgraph(g, _core_threshold(m))
    if core.order == 0:
        return None
    mode = finder_mode(core.order, exact, config)
    spot = (
        _exact_search(core, m, gamma, first_only)
        if mode == "exact"
        else _heuristic_search(core, m, gamma, config)
    )
    if spot is not None:
        logger.debug(f"{mode} finder: spot with |U|={len(spot.u)} |W|={len(spot.w)} e={len(spot.f)}")
    return spot


def certify_nowhere_dense(
    g: Graph, m: Number, gamma: Number, config: FinderConfig | None = None
) -> tuple[bool, str]:
    """(nowhere-dense?, finder mode used) under the configured finder."""
    config = config or FinderConfig()
    core = min_degree_subgraph(g, _core_threshold(m))
    if core.order == 0:
        return True, "exact"
    mode = finder_mode(core.order, None, config)
    return find_dense_spot(core, m, gamma, mode == "exact", config, first_only=True) is None, mode


def is_nowhere_dense(
    g: Graph, m: Number, gamma: Number, exact: bool | None = None, config: FinderConfig | None = None
) -> bool:
    return find_dense_spot(g, m, gamma, exact, config, first_only=True) is None


def extract_spot_family(
    g: Graph, m: Number, gamma: Number, exact: bool | None = None, config: FinderConfig | None = None
) -> SpotFamily:
    """Greedy maximal family: take a spot, delete its edges, repeat on the residual."""
    residual = g
    spots: list[DenseSpot] = []
    while True:
        spot = find_dense_spot(residual, m, gamma, exact, config)
        if spot is None:
            break
        spots.append(spot)
        residual = residual.remove_edges(spot.f)
    logger.info(f"Extracted {len(spots)} dense spots covering {g.e - residual.e} of {g.e} edges")
    return SpotFamily.from_spots(g.n, spots)


def thick_to_spot(g: Graph, vertices: Iterable[int], beta: Number, k: Number) -> DenseSpot | None:
    """Turn a (βk,β)-thick vertex set into a (βk/4, β/4)-dense spot when peeling allows.

    A local max-cut keeps at least half of the edges crossing; peeling then
    enforces the degraded parameters. The result is verified, never assumed.
    """
    members = sorted(g.check_subset(vertices))
    if not is_thick(g, members, beta, beta * k):
        raise InputError("vertex set is not (beta*k, beta)-thick")
    sub = g.induced(members)
    side = _local_maxcut(sub, members, _bfs_coloring(sub, members))
    spot = _peel_to_spot(
        sub,
        [v for v in members if side[v] == 0],
        [v for v in members if side[v] == 1],
        Fraction(beta) * k / 4,
        Fraction(beta) / 4,
    )
    return spot


def check_spot_facts(g: Graph, fam: SpotFamily, omega_star: Number, gamma: Number, k: int) -> dict[str, Any]:
    """Spot sides are at most (Ω/γ)k and no vertex lies in Ω/γ or more spots."""
    size_cap = Fraction(omega_star) / Fraction(gamma) * k
    count_cap = Fraction(omega_star) / Fraction(gamma)
    oversized = [i for i, s in enumerate(fam.spots) if max(len(s.u), len(s.w)) > size_cap]
    crowded = sorted(v for v in fam.captured_graph.vertices if len(fam.containing(v)) >= count_cap)
    precondition = g.maxdeg() <= omega_star * k
    return {
        "clauses": {
            "precondition_maxdeg": precondition,
            "spot_sizes": not oversized,
            "spots_per_vertex": not crowded,
        },
        "counts": {
            "spots": len(fam),
            "size_cap": str(size_cap),
            "count_cap": str(count_cap),
            "max_side": max((max(len(s.u), len(s.w)) for s in fam.spots), default=0),
            "max_spots_per_vertex": max((len(fam.containing(v)) for v in fam.captured_graph.vertices), default=0),
        },
        "violations": {"oversized_spots": oversized, "crowded_vertices": crowded},
    }
