#!/usr/bin/env python3
"""
Decomposition
Bounded and sparse decompositions: the spot / expander / regularity pipeline,
the LKS and generic wrappers, captured edges, the cluster graph and the dense
degeneration check.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..exceptions import InputError, PreconditionError
from ..utils.config import DecompParams, LksParams, OmegaSequence
from .avoiding import shrink_to_avoiding
from .degree_gap import GapResult, create_gap_generic, create_gap_lks
from .dense_spots import DenseSpot, SpotFamily, certify_nowhere_dense, extract_spot_family, find_dense_spot
from .graph_core import Edge, Graph, Partition, VertexSet, density, min_degree_subgraph, refine_all
from .lks_class import degree_split, is_lks, minimize_to_lks_min
from .regularity import PairOracle, PatternGraph, regularize_locally_dense
from .reports import ClauseResult, generate_report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundedDecomposition:
    """(𝐕, 𝒟, G_reg, G_exp, 𝔼) with respect to a prepartition 𝒱."""

    clusters: tuple[VertexSet, ...]
    spots: SpotFamily
    g_reg: Graph
    g_exp: Graph
    avoiding: VertexSet
    prepartition: Partition | None = None

    @property
    def cluster_size(self) -> int:
        return len(self.clusters[0]) if self.clusters else 0

    @property
    def cluster_vertices(self) -> VertexSet:
        return frozenset().union(*self.clusters) if self.clusters else frozenset()

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "clusters": [sorted(c) for c in self.clusters],
            "spots": self.spots.to_dict(),
            "g_reg": self.g_reg.to_dict(),
            "g_exp": self.g_exp.to_dict(),
            "avoiding": sorted(self.avoiding),
        }
        if self.prepartition is not None:
            data["prepartition"] = self.prepartition.to_list()
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BoundedDecomposition":
        try:
            g_reg = Graph.from_dict(data["g_reg"])
            g_exp = Graph.from_dict(data["g_exp"])
            spots = SpotFamily.from_dict(g_reg.n, data.get("spots", {}))
            clusters = tuple(frozenset(int(v) for v in c) for c in data.get("clusters", []))
            avoiding = frozenset(int(v) for v in data.get("avoiding", []))
            prepartition = Partition(data["prepartition"]) if data.get("prepartition") else None
        except KeyError as e:
            raise InputError(f"decomposition JSON misses field {e}") from e
        except (TypeError, ValueError) as e:
            if isinstance(e, InputError):
                raise
            raise InputError(f"malformed decomposition JSON: {e}") from e
        return cls(clusters, spots, g_reg, g_exp, avoiding, prepartition)


@dataclass(frozen=True)
class SparseDecomposition:
    """∇ = (ℍ, bounded decomposition of G - ℍ)."""

    huge: VertexSet
    bounded: BoundedDecomposition

    def to_dict(self, params: DecompParams | None = None) -> dict[str, Any]:
        data = {"huge": sorted(self.huge), **self.bounded.to_dict()}
        if params is not None:
            data["params"] = params.model_dump(mode="json", by_alias=True)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SparseDecomposition":
        if not isinstance(data, dict):
            raise InputError("decomposition JSON must be an object")
        return cls(frozenset(int(v) for v in data.get("huge", [])), BoundedDecomposition.from_dict(data))


@dataclass(frozen=True)
class ClusterGraph:
    clusters: tuple[VertexSet, ...]
    edges: tuple[Edge, ...]
    maxdeg: int
    degree_bound: Fraction | None = None
    spot_reach: int = 0
    spot_reach_bound: Fraction | None = None

    def degree_bound_holds(self) -> bool:
        return self.degree_bound is None or self.maxdeg <= self.degree_bound

    def spot_reach_holds(self) -> bool:
        return self.spot_reach_bound is None or self.spot_reach < self.spot_reach_bound

    def to_dict(self) -> dict[str, Any]:
        return {
            "nodes": len(self.clusters),
            "edges": [list(e) for e in self.edges],
            "maxdeg": self.maxdeg,
            "degree_bound": None if self.degree_bound is None else str(self.degree_bound),
            "spot_reach": self.spot_reach,
            "spot_reach_bound": None if self.spot_reach_bound is None else str(self.spot_reach_bound),
        }


@dataclass
class PipelineTrace:
    """Intermediate state of one bounded-decomposition run."""

    nu_tilde: Fraction = Fraction(0)
    spots_initial: int = 0
    spots_from_expander: int = 0
    atoms: int = 0
    chunks: list[list[int]] = field(default_factory=list)
    avoiding_candidate: int = 0
    avoiding_removed: list[int] = field(default_factory=list)
    v_to_avoiding: list[int] = field(default_factory=list)
    zones: list[list[int]] = field(default_factory=list)
    pattern: dict[str, Any] = field(default_factory=dict)
    garbage: list[int] = field(default_factory=list)
    rounds: int = 0
    stalled: bool = False
    regularity_history: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "nu_tilde": str(self.nu_tilde),
            "spots_initial": self.spots_initial,
            "spots_from_expander": self.spots_from_expander,
            "atoms": self.atoms,
            "chunks": self.chunks,
            "avoiding_candidate": self.avoiding_candidate,
            "avoiding_removed": self.avoiding_removed,
            "v_to_avoiding": self.v_to_avoiding,
            "zones": self.zones,
            "pattern": self.pattern,
            "garbage": self.garbage,
            "rounds": self.rounds,
            "stalled": self.stalled,
            "regularity_history": self.regularity_history,
        }


@dataclass
class BoundedRun:
    decomposition: BoundedDecomposition
    uncaptured: dict[str, Any]
    trace: PipelineTrace


@dataclass
class SparseRun:
    """A sparse decomposition of ``graph`` (the gap graph G') plus the gap index."""

    decomposition: SparseDecomposition
    graph: Graph
    star_index: int
    params: DecompParams
    gap: GapResult
    uncaptured: dict[str, Any]
    trace: PipelineTrace

    def to_dict(self, debug_trace: bool = False) -> dict[str, Any]:
        data = self.decomposition.to_dict(self.params)
        data["star_index"] = self.star_index
        data["graph"] = self.graph.to_dict()
        data["uncaptured"] = self.uncaptured
        if debug_trace:
            data["trace"] = self.trace.to_dict()
        return data


# -- pipeline stages ---------------------------------------------------


def _check_bounded_preconditions(
    g: Graph, prepartition: Partition, params: DecompParams, edge_budget: Fraction | int | None
) -> None:
    if prepartition.ground != g.vertices:
        raise InputError("prepartition must partition the vertex set of the graph")
    budget = params.k * g.order if edge_budget is None else edge_budget
    if g.e > budget:
        raise PreconditionError("edge_count", f"e(G) = {g.e} exceeds the edge budget {budget}")
    if g.maxdeg() > params.omega_star * params.k:
        raise PreconditionError("maxdeg", f"maxdeg {g.maxdeg()} exceeds Omega*k = {params.omega_star * params.k}")
    if len(prepartition) > params.s:
        raise PreconditionError("prepartition_size", f"{len(prepartition)} classes exceed s = {params.s}")


def _spots_and_expander(g: Graph, params: DecompParams, trace: PipelineTrace) -> tuple[SpotFamily, Graph]:
    """Greedy spot family, then the (⌊ρk⌋+1)-core of the rest; spots found there are saturated back."""
    m, gamma = params.gamma * params.k, params.gamma
    family = extract_spot_family(g, m, gamma, config=params.finder)
    spots = list(family.spots)
    trace.spots_initial = len(spots)
    core_degree = math.floor(params.rho * params.k) + 1
    while True:
        rest = g.remove_edges(e for spot in spots for e in spot.f)
        g_exp = min_degree_subgraph(rest, core_degree)
        extra = find_dense_spot(g_exp, m, gamma, config=params.finder)
        if extra is None:
            break
        spots.append(DenseSpot.from_sides(rest, extra.u, extra.w))
        trace.spots_from_expander += 1
    return SpotFamily.from_spots(g.n, spots), g_exp


def _atoms(family: SpotFamily) -> list[VertexSet]:
    """Classes of ⊞_D {U, W, V∖V(D)} inside V(G_𝒟)."""
    signature: dict[int, list[tuple[int, int]]] = {}
    for i, spot in enumerate(family.spots):
        for v in spot.u:
            signature.setdefault(v, []).append((i, 0))
        for v in spot.w:
            signature.setdefault(v, []).append((i, 1))
    groups: dict[tuple[tuple[int, int], ...], set[int]] = {}
    for v, sig in signature.items():
        groups.setdefault(tuple(sig), set()).add(v)
    return sorted((frozenset(b) for b in groups.values()), key=min)


def _chunk_window(nu_tilde: Fraction, k: int) -> tuple[int, int]:
    """Integer chunk sizes inside [ν̃k, 2ν̃k]; a window with no integer collapses to ⌈ν̃k⌉."""
    low = max(1, math.ceil(nu_tilde * k))
    high = math.floor(2 * nu_tilde * k)
    if high < low:
        logger.warning(f"No integer chunk size in [{nu_tilde * k}, {2 * nu_tilde * k}]; using {low}")
        high = low
    return low, high


def _chunks(
    atoms: list[VertexSet], nu_tilde: Fraction, k: int
) -> tuple[list[VertexSet], VertexSet, VertexSet]:
    """Split atoms larger than 2ν̃k into chunks with sizes in [⌈ν̃k⌉, ⌊2ν̃k⌋].

    Small atoms form 𝔼. Vertices of a big atom that no split into the window
    can hold are left over and join the regularity garbage.
    """
    low, high = _chunk_window(nu_tilde, k)
    chunks: list[VertexSet] = []
    small: set[int] = set()
    leftover: set[int] = set()
    for atom in atoms:
        if len(atom) <= 2 * nu_tilde * k:
            small |= atom
            continue
        members = sorted(atom)
        parts = math.ceil(len(members) / high)
        if parts * low > len(members):
            parts = len(members) // low
        kept = min(len(members), parts * high)
        base, extra = divmod(kept, parts)
        start = 0
        for i in range(parts):
            width = base + (1 if i < extra else 0)
            chunks.append(frozenset(members[start : start + width]))
            start += width
        leftover.update(members[kept:])
    return chunks, frozenset(small), frozenset(leftover)


def _pattern(g: Graph, family: SpotFamily, chunks: list[VertexSet], gamma: Fraction) -> PatternGraph:
    """Chunks A1, A2 are adjacent when some spot has A1 ⊂ U, A2 ⊂ W and d_G(A1, A2) ≥ γ."""
    side: dict[int, tuple[set[int], set[int]]] = {}
    for ci, chunk in enumerate(chunks):
        for si, spot in enumerate(family.spots):
            if chunk <= spot.u:
                side.setdefault(si, (set(), set()))[0].add(ci)
            elif chunk <= spot.w:
                side.setdefault(si, (set(), set()))[1].add(ci)
    edges = {
        (min(a, b), max(a, b))
        for us, ws in side.values()
        for a in us
        for b in ws
        if density(g, chunks[a], chunks[b]) >= gamma
    }
    return PatternGraph.from_edges(len(chunks), edges)


def _regular_graph(
    g_dense: Graph,
    pattern: PatternGraph,
    parts: list[list[VertexSet]],
    params: DecompParams,
    clusters: tuple[VertexSet, ...],
) -> Graph:
    """Keep G_𝒟 edges of ε-regular cluster pairs of density above γ² along pattern edges."""
    oracle = PairOracle(g_dense, params.eps, None, params.regularity)
    kept: list[Edge] = []
    for a, b in pattern.edges:
        for x in parts[a]:
            for y in parts[b]:
                between = g_dense.edges_between(x, y)
                if not between or Fraction(len(between), len(x) * len(y)) <= params.gamma**2:
                    continue
                if oracle.check(x, y).regular:
                    kept.extend(between)
    vertices = frozenset().union(*clusters) if clusters else frozenset()
    return Graph(g_dense.n, kept, vertices)


def decompose_bounded(
    g: Graph,
    prepartition: Partition | None,
    params: DecompParams,
    *,
    edge_budget: Fraction | int | None = None,
) -> BoundedRun:
    """Build a bounded decomposition of g with respect to the prepartition.

    ``edge_budget`` replaces the k·n edge bound when g is the moderate part of a
    larger host graph.
    """
    prepartition = prepartition or Partition.trivial(g.vertices)
    _check_bounded_preconditions(g, prepartition, params, edge_budget)
    params.relation_warnings()
    trace = PipelineTrace(nu_tilde=params.effective_nu_tilde)
    k = params.k
    try:
        logger.info("Stage 1: extracting dense spots and the expanding part")
        family, g_exp = _spots_and_expander(g, params, trace)

        logger.info("Stage 2: atoms, chunks and the avoiding candidate")
        atoms = _atoms(family)
        chunks, candidate, leftover = _chunks(atoms, trace.nu_tilde, k)
        trace.atoms, trace.chunks = len(atoms), [sorted(c) for c in chunks]
        trace.avoiding_candidate = len(candidate)

        logger.info("Stage 3: shrinking the avoiding set against the challenge suite")
        avoiding, removed = shrink_to_avoiding(g, family, candidate, params)
        trace.avoiding_removed = sorted(removed)

        logger.info("Stage 4: prepartition refinement")
        v_to_avoiding = frozenset(v for v in g.vertices if g.deg_into(v, avoiding) > params.b)
        splits = [
            prepartition,
            Partition((b for b in (g_exp.vertices, g.vertices - g_exp.vertices) if b), g.vertices),
            Partition((b for b in (v_to_avoiding, g.vertices - v_to_avoiding) if b), g.vertices),
        ]
        zones = refine_all(g.vertices, splits) if g.order else Partition([])
        trace.v_to_avoiding, trace.zones = sorted(v_to_avoiding), zones.to_list()

        logger.info("Stage 5: regularizing the captured dense spots")
        g_dense = family.captured_graph
        pattern = _pattern(g, family, chunks, params.gamma)
        trace.pattern = pattern.to_dict()
        config = params.regularity.model_copy(
            update={"min_cluster_size": max(params.regularity.min_cluster_size, math.ceil(params.nu * k))}
        )
        parts: list[list[VertexSet]] = [[] for _ in chunks]
        if chunks:
            result = regularize_locally_dense(g_dense, pattern, chunks, zones, params.eps, config)
            parts = [list(p.clusters) for p in result.parts]
            trace.rounds, trace.stalled = result.rounds, result.stalled
            trace.regularity_history = result.history
            trace.garbage = sorted(leftover.union(*(p.garbage for p in result.parts)))
        clusters = tuple(c for chunk_parts in parts for c in chunk_parts)

        logger.info("Stage 6: assembling the regular part")
        g_reg = _regular_graph(g_dense, pattern, parts, params.model_copy(update={"regularity": config}), clusters)
    except Exception as e:
        logger.error(f"Bounded decomposition failed: {str(e)}")
        raise

    decomposition = BoundedDecomposition(clusters, family, g_reg, g_exp, avoiding, prepartition)
    uncaptured = uncaptured_report(g, decomposition, params)
    logger.info(
        f"Bounded decomposition: {len(family)} spots, {len(clusters)} clusters, "
        f"e(G_reg)={g_reg.e}, e(G_exp)={g_exp.e}, |E|={len(avoiding)}"
    )
    return BoundedRun(decomposition, uncaptured, trace)


# -- captured edges and accounting ---------------------------------------


def _bounded_captured(d: BoundedDecomposition) -> set[Edge]:
    captured = set(d.g_reg.edges) | set(d.g_exp.edges)
    inside = d.avoiding | d.cluster_vertices
    for x, y in d.spots.captured_graph.edges:
        if (x in d.avoiding and y in inside) or (y in d.avoiding and x in inside):
            captured.add((x, y))
    return captured


def captured_edges(g: Graph, s: SparseDecomposition) -> Graph:
    """G_∇: spanning subgraph of the captured edges."""
    captured = _bounded_captured(s.bounded)
    captured |= {e for e in g.edges if e[0] in s.huge or e[1] in s.huge}
    return g.spanning(e for e in captured if g.has_edge(*e))


def uncaptured_report(g: Graph, d: BoundedDecomposition, params: DecompParams) -> dict[str, Any]:
    """Uncaptured edges against (4ε/γ + εΩ + γ + ρ)kn, the spot-edge bound and the expander slack."""
    nk = g.order * params.k
    eps, gamma, omega, rho = params.eps, params.gamma, params.omega_star, params.rho
    captured = _bounded_captured(d)
    uncaptured = sum(1 for e in g.edges if e not in captured)
    spot_edges = set(d.spots.captured_graph.edges)
    inside = d.avoiding | d.cluster_vertices
    spot_lost = sum(
        1
        for x, y in spot_edges
        if not d.g_reg.has_edge(x, y)
        and not ((x in d.avoiding and y in inside) or (y in d.avoiding and x in inside))
    )
    slack = sum(1 for e in g.edges if e not in spot_edges and not d.g_exp.has_edge(*e))
    bound = (4 * eps / gamma + eps * omega + gamma + rho) * nk
    spot_bound = (4 * eps / gamma + eps * omega + gamma) * nk
    return {
        "edges": g.e,
        "uncaptured": uncaptured,
        "bound": str(bound),
        "within_bound": uncaptured <= bound,
        "spot_edges_lost": spot_lost,
        "spot_bound": str(spot_bound),
        "spot_within_bound": spot_lost <= spot_bound,
        "expander_slack": slack,
        "expander_slack_bound": str(rho * nk),
    }


def cluster_graph(d: BoundedDecomposition, gamma: Fraction, params: DecompParams | None = None) -> ClusterGraph:
    """Clusters joined when their G_reg density is at least γ²; bounds need ``params``."""
    clusters = d.clusters
    owner = {v: i for i, c in enumerate(clusters) for v in c}
    counts: dict[Edge, int] = {}
    for x, y in d.g_reg.edges:
        a, b = owner.get(x), owner.get(y)
        if a is None or b is None or a == b:
            continue
        key = (min(a, b), max(a, b))
        counts[key] = counts.get(key, 0) + 1
    threshold = Fraction(gamma) ** 2
    edges = tuple(sorted(e for e, c in counts.items() if Fraction(c, len(clusters[e[0]]) * len(clusters[e[1]])) >= threshold))
    degree = [0] * len(clusters)
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1

    reach = 0
    degree_bound = reach_bound = None
    if params is not None and clusters:
        degree_bound = params.omega_star / (threshold * params.nu)
        reach_bound = 2 * params.omega_star**2 / (threshold * params.nu)
        g_dense = d.spots.captured_graph
        for x in g_dense.vertices:
            seen = {owner[y] for y in g_dense.neighbors(x) if y in owner}
            reach = max(reach, len(seen))
    return ClusterGraph(clusters, edges, max(degree, default=0), degree_bound, reach, reach_bound)


# -- sparse wrappers -----------------------------------------------------


def _params_for_gap(params: DecompParams, omegas: OmegaSequence, star: int, classes: int) -> DecompParams:
    return params.model_copy(
        update={
            "omega_star": omegas.value(star),
            "omega_star2": omegas.value(star + 1),
            "s": max(params.s, classes),
        }
    )


def _restrict_prepartition(blocks: Iterable[Iterable[int]], ground: VertexSet) -> Partition:
    return Partition((frozenset(b) & ground for b in blocks if frozenset(b) & ground), ground)


def _sparse_from_gap(
    gap: GapResult,
    omegas: OmegaSequence,
    params: DecompParams,
    blocks: Iterable[Iterable[int]] | None,
    classes: int,
) -> tuple[SparseDecomposition, DecompParams, BoundedRun]:
    g_gap = gap.subgraph
    star = gap.star_index
    huge = frozenset(v for v in g_gap.vertices if g_gap.degree(v) >= omegas.value(star + 1) * params.k)
    rest = g_gap.remove_vertices(huge)
    blocks = blocks if blocks is not None else [rest.vertices]
    prepartition = _restrict_prepartition(blocks, rest.vertices) if rest.order else Partition([])
    local = _params_for_gap(params, omegas, star, classes)
    run = decompose_bounded(rest, prepartition, local, edge_budget=params.k * g_gap.order)
    return SparseDecomposition(huge, run.decomposition), local, run


def _sparse_uncaptured(g: Graph, g_gap: Graph, s: SparseDecomposition, bound: Fraction) -> dict[str, Any]:
    captured = captured_edges(g_gap, s)
    uncaptured = g.e - captured.e
    return {"edges": g.e, "uncaptured": uncaptured, "bound": str(bound), "within_bound": uncaptured <= bound}


def decompose_sparse_lks(
    g: Graph, p: LksParams, omegas: OmegaSequence, params: DecompParams
) -> SparseRun:
    """Sparse decomposition of the gap graph G' ∈ LKSsmall(n, k, η/2) of an LKS graph."""
    if not is_lks(g, p):
        raise PreconditionError("is_lks", "input graph is not in LKS(n,k,eta)")
    if params.k != p.k:
        raise InputError(f"decomposition k={params.k} differs from LKS k={p.k}")
    logger.info("Stage 1: normalizing to an edge-minimal LKS graph")
    minimal = minimize_to_lks_min(g, p)
    logger.info("Stage 2: creating the degree gap")
    gap = create_gap_lks(minimal, p, omegas)
    split = degree_split(gap.subgraph, p.halved())
    logger.info("Stage 3: decomposing the moderate-degree part")
    s, local, run = _sparse_from_gap(gap, omegas, params, [split.small, split.large], 2)
    reach = len(omegas) if p.eta == 0 else min(len(omegas), math.floor(100 / p.eta**2))
    far = omegas.value(max(1, reach))
    eps, gamma, rho = params.eps, params.gamma, params.rho
    bound = (4 * eps / gamma + eps * far + gamma + rho) * p.k * g.order
    uncaptured = _sparse_uncaptured(gap.subgraph, gap.subgraph, s, bound)
    uncaptured["bounded"] = run.uncaptured
    return SparseRun(s, gap.subgraph, gap.star_index, local, gap, uncaptured, run.trace)


def decompose_generic(g: Graph, eta: Fraction, omegas: OmegaSequence, params: DecompParams) -> SparseRun:
    """Sparse decomposition of the generic gap graph; losses include the ≤ ηkn gap deletions."""
    eta = Fraction(eta)
    if eta <= 0:
        raise InputError(f"eta must be positive, got {eta}")
    if omegas.max_ratio() > eta / 4:
        raise PreconditionError("omega_ratio", f"ratio {omegas.max_ratio()} exceeds eta/4 = {eta / 4}")
    logger.info("Stage 1: creating the degree gap")
    gap = create_gap_generic(g, params.k, eta, omegas)
    logger.info("Stage 2: decomposing the moderate-degree part")
    s, local, run = _sparse_from_gap(gap, omegas, params, None, 1)
    far = omegas.value(max(1, min(len(omegas), math.floor(4 / eta))))
    eps, gamma, rho = params.eps, params.gamma, params.rho
    bound = (eta + 4 * eps / gamma + eps * far + gamma + rho) * params.k * g.order
    uncaptured = _sparse_uncaptured(g, gap.subgraph, s, bound)
    uncaptured["bounded"] = run.uncaptured
    return SparseRun(s, gap.subgraph, gap.star_index, local, gap, uncaptured, run.trace)


# -- dense degeneration --------------------------------------------------


def check_dense_degeneration(
    g: Graph, s: SparseDecomposition, params: DecompParams, c: Fraction, a: Fraction = Fraction(1, 8)
) -> dict[str, Any]:
    """For dense inputs with k = cn the exotic parts should be (almost) empty."""
    n = g.order
    c, a = Fraction(c), Fraction(a)
    dense_enough = n > 0 and g.e >= a * n * n
    k_matches = abs(params.k - c * n) <= 1
    relations = {
        "huge_threshold_above_n": params.omega_star2 * params.k > n,
        "spot_forced_in_expander": c * params.rho > params.gamma,
        "whole_graph_is_a_challenge": n <= params.lambda_ * params.k,
        "k_not_above_n": params.k <= n,
    }
    applicable = dense_enough and k_matches
    results = {
        "huge_empty": ClauseResult(not s.huge, {"huge": len(s.huge)}),
        "expander_empty": ClauseResult(s.bounded.g_exp.order == 0, {"expander_vertices": s.bounded.g_exp.order}),
        "avoiding_small": ClauseResult(
            len(s.bounded.avoiding) <= params.eps * params.k,
            {"avoiding": len(s.bounded.avoiding), "bound": str(params.eps * params.k)},
        ),
    }
    report = generate_report(results, applicable=applicable)
    report["preconditions"] = {"dense_enough": dense_enough, "k_equals_cn": k_matches}
    report["relations"] = relations
    if not relations["k_not_above_n"]:
        report["summary"]["warning"] = "k exceeds n: capture guarantees are vacuous"
    if not applicable:
        report["summary"]["note"] = "inapplicable: input is not dense with k = c*n"
    return report


def certify_expander(g_exp: Graph, params: DecompParams) -> tuple[bool, str]:
    """(γk, γ)-nowhere-density of G_exp and the finder mode that certified it."""
    return certify_nowhere_dense(g_exp, params.gamma * params.k, params.gamma, params.finder)
