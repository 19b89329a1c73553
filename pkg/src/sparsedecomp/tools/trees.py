#!/usr/bin/env python3
"""
Trees
Rooted trees, center-rooted AHU canonical codes, the small-tree corpus and shrub
decompositions.
"""

import itertools
import logging
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import networkx as nx

from ..exceptions import InputError
from .graph_core import Edge, normalize_edge

logger = logging.getLogger(__name__)

CORPUS_CAP = 10
_PRUFER_LIMIT = 7

Code = tuple[Any, ...]


@dataclass(frozen=True)
class RootedTree:
    """Tree on vertices 0..k-1 given by a parent array; the root's parent is -1."""

    parent: tuple[int, ...]
    root: int = 0

    def __post_init__(self) -> None:
        k = len(self.parent)
        if k == 0:
            raise InputError("a tree needs at least one vertex")
        if not 0 <= self.root < k or self.parent[self.root] != -1:
            raise InputError("root must be a vertex whose parent is -1")
        for v, p in enumerate(self.parent):
            if v != self.root and not 0 <= p < k:
                raise InputError(f"vertex {v} has invalid parent {p}")
        # every vertex must reach the root without revisiting
        for v in range(k):
            seen = set()
            while v != self.root:
                if v in seen:
                    raise InputError("parent array contains a cycle")
                seen.add(v)
                v = self.parent[v]

    @classmethod
    def from_edges(cls, k: int, edges: Iterable[Sequence[int]], root: int = 0) -> "RootedTree":
        adj: dict[int, list[int]] = {v: [] for v in range(k)}
        count = 0
        for a, b in edges:
            if not (0 <= a < k and 0 <= b < k) or a == b:
                raise InputError(f"invalid tree edge ({a}, {b})")
            adj[a].append(b)
            adj[b].append(a)
            count += 1
        if count != k - 1:
            raise InputError(f"a tree on {k} vertices has {k - 1} edges, got {count}")
        parent = [-2] * k
        parent[root] = -1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in sorted(adj[v]):
                if parent[u] == -2:
                    parent[u] = v
                    queue.append(u)
        if -2 in parent:
            raise InputError("tree edges do not form a connected graph")
        return cls(tuple(parent), root)

    @classmethod
    def from_prufer(cls, sequence: Sequence[int]) -> "RootedTree":
        k = len(sequence) + 2
        return cls.from_edges(k, nx.from_prufer_sequence(list(sequence)).edges())

    @classmethod
    def from_networkx(cls, t: nx.Graph, root: int = 0) -> "RootedTree":
        nodes = sorted(t.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[a], index[b]) for a, b in t.edges()), root)

    @classmethod
    def path(cls, k: int) -> "RootedTree":
        return cls(tuple(range(-1, k - 1)))

    @classmethod
    def star(cls, k: int) -> "RootedTree":
        return cls(tuple([-1] + [0] * (k - 1)))

    @classmethod
    def complete_binary(cls, depth: int) -> "RootedTree":
        """Complete binary tree with ``depth`` levels (2^depth - 1 vertices)."""
        k = 2**depth - 1
        return cls(tuple([-1] + [(v - 1) // 2 for v in range(1, k)]))

    @property
    def order(self) -> int:
        return len(self.parent)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(normalize_edge(v, p) for v, p in enumerate(self.parent) if p >= 0))

    def children(self, v: int) -> list[int]:
        return [u for u, p in enumerate(self.parent) if p == v]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.order)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def bfs_order(self) -> list[int]:
        kids: dict[int, list[int]] = {}
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids.setdefault(p, []).append(v)
        order = [self.root]
        for v in order:
            order.extend(kids.get(v, []))
        return order

    def depth(self) -> list[int]:
        depth = [0] * self.order
        for v in self.bfs_order()[1:]:
            depth[v] = depth[self.parent[v]] + 1
        return depth

    def maxdeg(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency()), default=0)

    def independence_number(self) -> int:
        take = [1] * self.order
        skip = [0] * self.order
        for v in reversed(self.bfs_order()):
            p = self.parent[v]
            if p >= 0:
                take[p] += skip[v]
                skip[p] += max(take[v], skip[v])
        return max(take[self.root], skip[self.root])

    def to_networkx(self) -> nx.Graph:
        t = nx.Graph()
        t.add_nodes_from(range(self.order))
        t.add_edges_from(self.edges)
        return t

    def to_dict(self) -> dict[str, Any]:
        return {"k": self.order, "parent": list(self.parent), "root": self.root}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RootedTree":
        try:
            parent = tuple(int(p) for p in data["parent"])
            root = int(data.get("root", 0))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed tree JSON: {e}") from e
        if "k" in data and int(data["k"]) != len(parent):
            raise InputError(f"tree JSON says k={data['k']} but has {len(parent)} parents")
        return cls(parent, root)


def tree_centers(adj: Sequence[Sequence[int]]) -> list[int]:
    """The one or two centers, found by stripping leaves layer by layer."""
    n = len(adj)
    if n <= 2:
        return list(range(n))
    degree = [len(nbrs) for nbrs in adj]
    leaves = [v for v in range(n) if degree[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(leaves)
        layer = []
        for v in leaves:
            degree[v] = 0
            for u in adj[v]:
                if degree[u] > 0:
                    degree[u] -= 1
                    if degree[u] == 1:
                        layer.append(u)
        leaves = layer
    return sorted(leaves)


def _ahu(v: int, parent: int, adj: Sequence[Sequence[int]]) -> Code:
    return tuple(sorted(_ahu(u, v, adj) for u in adj[v] if u != parent))


def canonical_code(t: RootedTree) -> Code:
    """Isomorphism invariant of the unrooted tree: the least AHU code over its centers."""
    adj = t.adjacency()
    return min(_ahu(c, -1, adj) for c in tree_centers(adj))


def _prufer_corpus(k: int) -> list[RootedTree]:
    found: dict[Code, RootedTree] = {}
    for sequence in itertools.product(range(k), repeat=k - 2):
        tree = RootedTree.from_prufer(sequence)
        found.setdefault(canonical_code(tree), tree)
    return list(found.values())


def all_trees(k: int) -> list[RootedTree]:
    """All trees of order k up to isomorphism, ordered by canonical code.

    Orders up to 7 come from all Prüfer sequences, deduplicated by canonical
    code. Orders 8 to 10 use ``nx.nonisomorphic_trees``, which already yields
    one tree per class, so the canonical-code map there only fixes the order.
    """
    if k < 1:
        raise InputError(f"tree order must be positive, got {k}")
    if k > CORPUS_CAP:
        raise InputError(f"tree corpus is capped at order {CORPUS_CAP}, got {k}")
    if k <= 2:
        trees = [RootedTree.path(k)]
    elif k <= _PRUFER_LIMIT:
        trees = _prufer_corpus(k)
    else:
        unique: dict[Code, RootedTree] = {}
        for t in nx.nonisomorphic_trees(k):
            tree = RootedTree.from_networkx(t)
            unique.setdefault(canonical_code(tree), tree)
        trees = list(unique.values())
    return sorted(trees, key=canonical_code)


# -- shrubs ------------------------------------------------------------


@dataclass(frozen=True)
class Shrub:
    """A component of T - W together with its attachment to the cut vertices."""

    vertices: frozenset[int]
    root: int
    cut_neighbours: frozenset[int]

    @property
    def is_end(self) -> bool:
        return len(self.cut_neighbours) <= 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": sorted(self.vertices),
            "root": self.root,
            "cut_neighbours": sorted(self.cut_neighbours),
            "end": self.is_end,
        }


@dataclass(frozen=True)
class ShrubDecomposition:
    cut_vertices: frozenset[int]
    shrubs: tuple[Shrub, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"cut_vertices": sorted(self.cut_vertices), "shrubs": [s.to_dict() for s in self.shrubs]}


def split_at(t: RootedTree, cut: Iterable[int]) -> ShrubDecomposition:
    """Components of T - W, each rooted at its vertex closest to the tree root."""
    cut_set = frozenset(cut)
    adj = t.adjacency()
    depth = t.depth()
    seen: set[int] = set(cut_set)
    shrubs = []
    for start in t.bfs_order():
        if start in seen:
            continue
        component = {start}
        queue = deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    component.add(u)
                    queue.append(u)
        members = frozenset(component)
        root = min(members, key=lambda v: (depth[v], v))
        touching = frozenset(u for v in members for u in adj[v] if u in cut_set)
        shrubs.append(Shrub(members, root, touching))
    return ShrubDecomposition(cut_set, tuple(shrubs))


def shrub_decompose(t: RootedTree, tau: Fraction, k: int) -> ShrubDecomposition:
    """Cut the deepest vertex whose remaining subtree exceeds τk until every shrub fits."""
    tau = Fraction(tau)
    if not 0 < tau <= 1:
        raise InputError(f"tau must lie in (0,1], got {tau}")
    if tau * k < 1:
        raise InputError(f"tau*k = {tau * k} is below 1: no shrub can hold a vertex")
    if t.order != k:
        raise InputError(f"tree has order {t.order}, expected k={k}")
    limit = tau * k
    size = [1] * t.order
    cut: set[int] = set()
    for v in reversed(t.bfs_order()):
        if size[v] > limit:
            cut.add(v)
            size[v] = 0
        p = t.parent[v]
        if p >= 0:
            size[p] += size[v]
    result = split_at(t, cut)
    logger.debug(f"Shrub decomposition: {len(cut)} cut vertices, {len(result.shrubs)} shrubs (limit {limit})")
    return result


def subtree(t: RootedTree, vertices: Iterable[int], root: int) -> tuple[RootedTree, list[int]]:
    """The subtree induced on ``vertices`` relabelled 0..s-1 from ``root``; returns the old ids too."""
    members = frozenset(vertices)
    if root not in members:
        raise InputError("subtree root must belong to the vertex set")
    old = [root] + sorted(members - {root})
    index = {v: i for i, v in enumerate(old)}
    edges = [(index[a], index[b]) for a, b in t.edges if a in members and b in members]
    return RootedTree.from_edges(len(old), edges, 0), old