#!/usr/bin/env python3
"""
Graph Core
Immutable simple graphs over dense integer ids, pair counts and densities,
partition algebra and min-degree peeling.
"""

import logging
import math
import random
from collections.abc import Iterable, Iterator, Sequence
from fractions import Fraction
from typing import Any

import networkx as nx

from ..exceptions import InputError

logger = logging.getLogger(__name__)

VertexSet = frozenset[int]
Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph whose vertices are a subset of the id universe 0..n-1.

    Derived subgraphs keep the host's universe ``n`` and carry their own vertex set,
    so ids never need relabelling between pipeline stages.
    """

    __slots__ = ("_adj", "_edges", "_n", "_nx", "_vertices")

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        vertices: Iterable[int] | None = None,
    ):
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        verts = frozenset(range(n)) if vertices is None else frozenset(int(v) for v in vertices)
        for v in verts:
            if not 0 <= v < n:
                raise InputError(f"vertex id {v} out of range 0..{n - 1}")

        adj: dict[int, set[int]] = {v: set() for v in verts}
        seen: set[Edge] = set()
        for raw in edges:
            if len(raw) != 2:
                raise InputError(f"edge must have two endpoints, got {list(raw)}")
            u, v = int(raw[0]), int(raw[1])
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if u not in adj or v not in adj:
                raise InputError(f"edge ({u}, {v}) leaves the vertex set")
            seen.add(normalize_edge(u, v))
            adj[u].add(v)
            adj[v].add(u)

        self._n = n
        self._vertices: VertexSet = verts
        self._adj: dict[int, VertexSet] = {v: frozenset(nbrs) for v, nbrs in adj.items()}
        self._edges: tuple[Edge, ...] = tuple(sorted(seen))
        self._nx: nx.Graph | None = None

    # -- basic queries -------------------------------------------------

    @property
    def n(self) -> int:
        """Size of the id universe (not necessarily the vertex count)."""
        return self._n

    @property
    def vertices(self) -> VertexSet:
        return self._vertices

    @property
    def order(self) -> int:
        return len(self._vertices)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def e(self) -> int:
        return len(self._edges)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbors(self, v: int) -> VertexSet:
        return self._adj[v]

    def deg_into(self, v: int, s: Iterable[int]) -> int:
        """deg(v, S): number of neighbours of v inside S."""
        return len(self._adj[v] & (s if isinstance(s, (set, frozenset)) else frozenset(s)))

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def mindeg(self, subset: Iterable[int] | None = None) -> float:
        """Minimum degree over ``subset``; infinite for an empty set."""
        pool = self._vertices if subset is None else subset
        return min((len(self._adj[v]) for v in pool), default=math.inf)

    def maxdeg(self, subset: Iterable[int] | None = None) -> int:
        pool = self._vertices if subset is None else subset
        return max((len(self._adj[v]) for v in pool), default=0)

    def check_subset(self, s: Iterable[int], name: str = "set") -> VertexSet:
        members = frozenset(int(v) for v in s)
        stray = members - self._vertices
        if stray:
            raise InputError(f"{name} contains vertices outside the graph: {sorted(stray)[:5]}")
        return members

    # -- derived graphs ------------------------------------------------

    def induced(self, s: Iterable[int]) -> "Graph":
        keep = self.check_subset(s)
        return Graph(self._n, (e for e in self._edges if e[0] in keep and e[1] in keep), keep)

    def remove_vertices(self, s: Iterable[int]) -> "Graph":
        """G - U: the subgraph induced on the remaining vertices."""
        return self.induced(self._vertices - frozenset(s))

    def remove_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        drop = {normalize_edge(int(e[0]), int(e[1])) for e in edges}
        return Graph(self._n, (e for e in self._edges if e not in drop), self._vertices)

    def spanning(self, edges: Iterable[Sequence[int]]) -> "Graph":
        """Subgraph on the same vertex set with the given edges."""
        return Graph(self._n, edges, self._vertices)

    def edge_subgraph(self, edges: Iterable[Sequence[int]]) -> "Graph":
        """Subgraph spanned by the given edges and their endpoints."""
        chosen = [normalize_edge(int(e[0]), int(e[1])) for e in edges]
        return Graph(self._n, chosen, {v for e in chosen for v in e})

    def union(self, other: "Graph") -> "Graph":
        if other.n != self._n:
            raise InputError("graphs live on different id universes")
        return Graph(self._n, self._edges + other.edges, self._vertices | other.vertices)

    def edges_between(self, x: Iterable[int], y: Iterable[int]) -> list[Edge]:
        """Edges with one end in X and the other in Y (X, Y disjoint)."""
        ys = frozenset(y)
        return sorted(
            {normalize_edge(u, v) for u in x for v in self._adj[u] if v in ys}
        )

    def to_networkx(self) -> nx.Graph:
        if self._nx is None:
            g = nx.Graph()
            g.add_nodes_from(sorted(self._vertices))
            g.add_edges_from(self._edges)
            self._nx = nx.freeze(g)
        return self._nx

    @classmethod
    def from_networkx(cls, g: nx.Graph, n: int | None = None) -> "Graph":
        nodes = [int(v) for v in g.nodes]
        universe = n if n is not None else (max(nodes) + 1 if nodes else 0)
        return cls(universe, g.edges, nodes if len(nodes) != universe else None)

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"n": self._n, "edges": [list(e) for e in self._edges]}
        if len(self._vertices) != self._n:
            data["vertices"] = sorted(self._vertices)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Graph":
        if not isinstance(data, dict) or "n" not in data:
            raise InputError('graph JSON must be an object with an "n" field')
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise InputError('"n" must be an integer')
        edges = data.get("edges", [])
        if not isinstance(edges, list):
            raise InputError('"edges" must be a list of pairs')
        return cls(n, edges, data.get("vertices"))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self._n, self._vertices, self._edges) == (other.n, other.vertices, other.edges)

    def __hash__(self) -> int:
        return hash((self._n, self._vertices, self._edges))

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._vertices))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, order={self.order}, e={self.e})"


def ordered_pair_count(g: Graph, x: Iterable[int], y: Iterable[int]) -> int:
    """e(X,Y): ordered pairs (x,y) in X×Y that are edges; 2e(X) = e(X,X)."""
    xs = g.check_subset(x, "x")
    ys = g.check_subset(y, "y")
    return sum(g.deg_into(v, ys) for v in xs)


def density(g: Graph, u: Iterable[int], w: Iterable[int]) -> Fraction:
    us = g.check_subset(u, "u")
    ws = g.check_subset(w, "w")
    if not us or not ws:
        raise InputError("density needs two nonempty sets")
    if us & ws:
        raise InputError("density needs disjoint sets")
    return Fraction(ordered_pair_count(g, us, ws), len(us) * len(ws))


class Partition:
    """Partition of a ground set into nonempty, pairwise disjoint blocks."""

    __slots__ = ("_blocks", "_ground", "_index")

    def __init__(self, blocks: Iterable[Iterable[int]], ground: Iterable[int] | None = None):
        parts = [frozenset(int(v) for v in b) for b in blocks]
        if any(not b for b in parts):
            raise InputError("partition blocks must be nonempty")
        index: dict[int, int] = {}
        for i, block in enumerate(parts):
            for v in block:
                if v in index:
                    raise InputError(f"vertex {v} appears in two blocks")
                index[v] = i
        covered = frozenset(index)
        if ground is not None and frozenset(ground) != covered:
            raise InputError("partition blocks do not cover the ground set exactly")
        ordered = sorted(parts, key=min)
        self._blocks: tuple[VertexSet, ...] = tuple(ordered)
        self._ground: VertexSet = covered
        self._index = {v: i for i, b in enumerate(ordered) for v in b}

    @classmethod
    def trivial(cls, ground: Iterable[int]) -> "Partition":
        members = frozenset(ground)
        return cls([members] if members else [])

    @property
    def blocks(self) -> tuple[VertexSet, ...]:
        return self._blocks

    @property
    def ground(self) -> VertexSet:
        return self._ground

    def block_of(self, v: int) -> int:
        return self._index[v]

    def refines(self, other: "Partition") -> bool:
        if self._ground != other.ground:
            return False
        return all(len({other.block_of(v) for v in b}) == 1 for b in self._blocks)

    def restrict(self, s: Iterable[int]) -> "Partition":
        keep = frozenset(s)
        return Partition(b & keep for b in self._blocks if b & keep)

    def to_list(self) -> list[list[int]]:
        return [sorted(b) for b in self._blocks]

    def __len__(self) -> int:
        return len(self._blocks)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self._blocks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return set(self._blocks) == set(other.blocks)

    def __hash__(self) -> int:
        return hash(frozenset(self._blocks))

    def __repr__(self) -> str:
        return f"Partition({self.to_list()})"


def common_refinement(p: Partition, q: Partition) -> Partition:
    """p ⊞ q: all nonempty intersections of a block of p with a block of q."""
    if p.ground != q.ground:
        raise InputError("partitions have different ground sets")
    cells: dict[tuple[int, int], set[int]] = {}
    for v in p.ground:
        cells.setdefault((p.block_of(v), q.block_of(v)), set()).add(v)
    return Partition(cells.values())


def refine_all(ground: Iterable[int], partitions: Iterable[Partition]) -> Partition:
    """Common refinement of many partitions of the same ground set."""
    result = Partition.trivial(ground)
    for part in partitions:
        result = common_refinement(result, part)
    return result


def min_degree_subgraph(g: Graph, ell: int, rng: random.Random | None = None) -> Graph:
    """The ℓ-core: repeatedly delete a vertex of degree < ℓ.

    The surviving vertex set does not depend on the order of deletions; ``rng``
    only shuffles that order (used to exercise this in tests).
    """
    if ell < 0:
        raise InputError(f"ell must be non-negative, got {ell}")
    deg = {v: g.degree(v) for v in g.vertices}
    alive = set(g.vertices)
    queue = sorted(v for v in alive if deg[v] < ell)
    while queue:
        if rng is not None:
            i = rng.randrange(len(queue))
            queue[i], queue[-1] = queue[-1], queue[i]
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in g.neighbors(v):
            if u in alive:
                deg[u] -= 1
                if deg[u] == ell - 1:
                    queue.append(u)
    logger.debug(f"{ell}-core keeps {len(alive)} of {g.order} vertices")
    return g.induced(alive)
