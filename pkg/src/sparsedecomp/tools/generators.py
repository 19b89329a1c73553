#!/usr/bin/env python3
"""
Generators
Extremal and locally dense example graphs, random instances, small classical
families and exhaustive containment oracles.
"""

import logging
import math
import random
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ..exceptions import InputError
from ..utils.config import (
    CompleteSpec,
    CycleSpec,
    EsExtremalSpec,
    GeneratorSpec,
    LksExtremalSpec,
    LocallyDenseSpec,
    RandomSpec,
    RegularSpec,
    UnionSpec,
)
from .graph_core import Edge, Graph, VertexSet
from .regularity import PatternGraph
from .trees import RootedTree

logger = logging.getLogger(__name__)


# -- extremal families -------------------------------------------------


def lks_extremal(n: int) -> Graph:
    """K_n with every edge inside the first n/2+1 vertices deleted."""
    if n < 4 or n % 2:
        raise InputError(f"lks_extremal needs an even n >= 4, got {n}")
    independent = n // 2 + 1
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if b >= independent]
    return Graph(n, edges)


def es_extremal(n: int, k: int) -> Graph:
    """A set of ⌊(k-2)/2⌋ vertices joined to everything, itself included."""
    if k < 2:
        raise InputError(f"es_extremal needs k >= 2, got {k}")
    s = (k - 2) // 2
    if s >= n:
        raise InputError(f"es_extremal needs floor((k-2)/2) = {s} < n = {n}")
    edges = [(a, b) for a in range(s) for b in range(a + 1, n)]
    return Graph(n, edges)


def es_extremal_edge_count(n: int, k: int) -> int:
    s = (k - 2) // 2
    return s * (n - s) + math.comb(s, 2)


# -- small classical families -------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph(n, ((a, b) for a in range(n) for b in range(a + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph(n, ((v, (v + 1) % n) for v in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((v, v + 1) for v in range(n - 1)))


def star_graph(n: int) -> Graph:
    """Star on n vertices centred at 0."""
    return Graph(n, ((0, v) for v in range(1, n)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, ((x, a + y) for x in range(a) for y in range(b)))


def half_graph(n: int) -> Graph:
    """Bipartite half graph: x_i ~ y_j iff i ≤ j, sides 0..n-1 and n..2n-1."""
    return Graph(2 * n, ((i, n + j) for i in range(n) for j in range(i, n)))


def union(graphs: Sequence[Graph]) -> Graph:
    """Disjoint union, relabelling each component after the previous ones."""
    offset = 0
    edges: list[Edge] = []
    for g in graphs:
        index = {v: offset + i for i, v in enumerate(sorted(g.vertices))}
        edges.extend((index[a], index[b]) for a, b in g.edges)
        offset += g.order
    return Graph(offset, edges)


def disjoint_cliques(n: int, k: int) -> Graph:
    """⌊n/(k-1)⌋ disjoint copies of K_{k-1}; contains no tree of order k."""
    if k < 2:
        raise InputError(f"disjoint_cliques needs k >= 2, got {k}")
    return union([complete_graph(k - 1)] * (n // (k - 1)))


# -- random instances --------------------------------------------------


def random_graph(n: int, p: Fraction | None = None, m: int | None = None, seed: int = 0) -> Graph:
    """G(n, p) with exact-rational p, or G(n, m)."""
    if (p is None) == (m is None):
        raise InputError("give exactly one of p and m")
    if n < 0:
        raise InputError(f"vertex count must be non-negative, got {n}")
    if m is not None:
        if not 0 <= m <= math.comb(n, 2):
            raise InputError(f"cannot place {m} edges on {n} vertices")
        return Graph.from_networkx(nx.gnm_random_graph(n, m, seed=seed), n)
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InputError(f"p must lie in [0,1], got {p}")
    rng = random.Random(seed)
    return Graph(n, ((a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p))


def regular_graph(n: int, d: int, seed: int = 0) -> Graph:
    if d < 0 or d >= n or (n * d) % 2:
        raise InputError(f"no {d}-regular graph on {n} vertices")
    try:
        return Graph.from_networkx(nx.random_regular_graph(d, n, seed=seed), n)
    except nx.NetworkXError as e:
        raise InputError(f"cannot build a {d}-regular graph on {n} vertices: {e}") from e


@dataclass(frozen=True)
class LocallyDenseInstance:
    graph: Graph
    pattern: PatternGraph
    ensemble: tuple[VertexSet, ...]


def _bounded_pattern(ell: int, maxdeg: int, rng: random.Random) -> list[Edge]:
    pairs = [(a, b) for a in range(ell) for b in range(a + 1, ell)]
    rng.shuffle(pairs)
    degree = [0] * ell
    chosen = []
    for a, b in pairs:
        if degree[a] < maxdeg and degree[b] < maxdeg:
            chosen.append((a, b))
            degree[a] += 1
            degree[b] += 1
    return sorted(chosen)


def _blocks(members: Sequence[int], size: int | None) -> list[list[int]]:
    if size is None:
        return [[v] for v in members]
    return [list(members[i : i + size]) for i in range(0, len(members), size)]


def locally_dense(
    ell: int,
    set_size: int,
    pattern_maxdeg: int,
    density: Fraction,
    seed: int = 0,
    block_size: int | None = None,
) -> LocallyDenseInstance:
    """ℓ disjoint sets joined by random bipartite graphs along a bounded-degree pattern.

    With ``block_size`` each set is cut into consecutive blocks and block pairs
    are joined completely or not at all, which makes pairs visibly irregular.
    """
    density = Fraction(density)
    if ell < 1 or set_size < 1 or pattern_maxdeg < 0:
        raise InputError("locally_dense needs ell >= 1, set_size >= 1 and pattern_maxdeg >= 0")
    if not 0 <= density <= 1:
        raise InputError(f"density must lie in [0,1], got {density}")
    if block_size is not None and block_size < 1:
        raise InputError(f"block_size must be positive, got {block_size}")
    rng = random.Random(seed)
    sets = [list(range(i * set_size, (i + 1) * set_size)) for i in range(ell)]
    pattern = _bounded_pattern(ell, pattern_maxdeg, rng)
    edges: list[Edge] = []
    for a, b in pattern:
        for xs in _blocks(sets[a], block_size):
            for ys in _blocks(sets[b], block_size):
                if rng.random() < density:
                    edges.extend((x, y) for x in xs for y in ys)
    graph = Graph(ell * set_size, edges)
    logger.debug(f"Locally dense instance: {ell} sets, {len(pattern)} pattern edges, {graph.e} edges")
    return LocallyDenseInstance(
        graph, PatternGraph.from_edges(ell, pattern, pattern_maxdeg), tuple(frozenset(s) for s in sets)
    )


# -- containment oracles -----------------------------------------------


def contains_subgraph(g: Graph, pattern: nx.Graph) -> bool:
    """Exhaustive (not necessarily induced) subgraph search."""
    if pattern.number_of_nodes() > g.order:
        return False
    return GraphMatcher(g.to_networkx(), pattern).subgraph_is_monomorphic()


def has_path(g: Graph, k: int) -> bool:
    """Whether g contains a path on k vertices."""
    if k <= 0:
        return True
    return contains_subgraph(g, nx.path_graph(k))


def contains_tree(g: Graph, t: RootedTree) -> bool:
    return contains_subgraph(g, t.to_networkx())


# -- spec dispatch -----------------------------------------------------


def _spec_graph(spec: GeneratorSpec) -> Graph:
    if isinstance(spec, LksExtremalSpec):
        return lks_extremal(spec.n)
    if isinstance(spec, EsExtremalSpec):
        return es_extremal(spec.n, spec.k)
    if isinstance(spec, LocallyDenseSpec):
        return locally_dense(
            spec.ell, spec.set_size, spec.pattern_maxdeg, spec.density, spec.seed, spec.block_size
        ).graph
    if isinstance(spec, RandomSpec):
        return random_graph(spec.n, spec.p, spec.m, spec.seed)
    if isinstance(spec, RegularSpec):
        return regular_graph(spec.n, spec.d, spec.seed)
    if isinstance(spec, CompleteSpec):
        return complete_graph(spec.n)
    if isinstance(spec, CycleSpec):
        return cycle_graph(spec.n)
    if isinstance(spec, UnionSpec):
        return union([_spec_graph(part) for part in spec.components])
    raise InputError(f"unknown generator kind {type(spec).__name__}")


def generate(spec: GeneratorSpec) -> Graph:
    graph = _spec_graph(spec)
    logger.info(f"Generated {spec.kind}: n={graph.order}, e={graph.e}")
    return graph