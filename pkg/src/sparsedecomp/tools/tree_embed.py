#!/usr/bin/env python3
"""
Tree Embedding
Greedy minimum-degree embedding, look-ahead path embedding into a nowhere-dense
host, shrub embedding through an avoiding set, and shrub-by-shrub embedding with
a random reserve set.
"""

import logging
import random
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..exceptions import InputError, InvariantViolation, PreconditionError
from ..utils.config import EmbedParams, FinderConfig
from .dense_spots import SpotFamily, certify_nowhere_dense
from .graph_core import Graph, VertexSet
from .trees import RootedTree, ShrubDecomposition, split_at

logger = logging.getLogger(__name__)


@dataclass
class Embedding:
    """Partial injective map φ: tree vertex -> host vertex, plus the reserve set R."""

    map: dict[int, int] = field(default_factory=dict)
    reserve: set[int] = field(default_factory=set)
    active: int | None = None
    trace: list[dict[str, Any]] = field(default_factory=list)

    @property
    def image(self) -> VertexSet:
        return frozenset(self.map.values())

    def place(self, v: int, x: int) -> None:
        if x in self.map.values():
            raise InvariantViolation(f"host vertex {x} is already used")
        self.map[v] = x
        self.active = v

    def is_valid(self, t: RootedTree, g: Graph) -> bool:
        """Injective, total on t, and edge-preserving into g."""
        if len(set(self.map.values())) != len(self.map) or set(self.map) != set(range(t.order)):
            return False
        return all(g.has_edge(self.map[a], self.map[b]) for a, b in t.edges)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "map": {str(v): x for v, x in sorted(self.map.items())},
            "reserve": sorted(self.reserve),
        }
        if self.trace:
            data["trace"] = self.trace
        return data


# -- greedy ------------------------------------------------------------


def _greedy_from(t: RootedTree, g: Graph, start: int) -> Embedding | None:
    emb = Embedding()
    emb.place(t.root, start)
    used = {start}
    for v in t.bfs_order()[1:]:
        host = emb.map[t.parent[v]]
        free = sorted(g.neighbors(host) - used)
        if not free:
            return None
        emb.place(v, free[0])
        used.add(free[0])
    emb.active = None
    return emb


def greedy_embed(t: RootedTree, g: Graph, start: int | None = None) -> Embedding | None:
    """BFS-order greedy embedding; always succeeds when mindeg(g) ≥ v(t) - 1."""
    if start is not None:
        g.check_subset([start], "start vertex")
        return _greedy_from(t, g, start)
    for candidate in sorted(g.vertices):
        emb = _greedy_from(t, g, candidate)
        if emb is not None:
            return emb
    return None


# -- look-ahead path embedding ----------------------------------------


def _below_sqrt(value: int, gamma: Fraction, k: int) -> bool:
    """value < √γ·k, compared exactly."""
    return value * value < gamma * k * k


def embed_path_expander(
    path_len: int,
    gexp: Graph,
    gamma: Fraction,
    rho: Fraction,
    *,
    strict: bool = True,
    start: int | None = None,
    config: FinderConfig | None = None,
) -> Embedding | None:
    """Embed the path on ``path_len`` vertices keeping every host degree into the image below √γ·k.

    The path order plays the role of k. In strict mode the host must be
    certified (γk,γ)-nowhere-dense with mindeg > ρk and ρ > 17√γ, and a stuck
    extension is an invariant violation; relaxed mode only warns and falls back
    to any free neighbour, recording the look-ahead breaches in the trace.
    """
    gamma, rho, k = Fraction(gamma), Fraction(rho), path_len
    if k < 1:
        raise InputError(f"path order must be positive, got {k}")
    if gexp.order == 0:
        raise PreconditionError("host", "host graph is empty")
    problems = []
    nowhere, mode = certify_nowhere_dense(gexp, gamma * k, gamma, config)
    if not nowhere:
        problems.append(("nowhere_dense", f"host contains a (gamma*k, gamma)-dense spot ({mode} finder)"))
    if gexp.mindeg() <= rho * k:
        problems.append(("mindeg", f"mindeg {gexp.mindeg()} is not above rho*k = {rho * k}"))
    if rho * rho <= 289 * gamma:
        problems.append(("rho_gamma", "rho is not above 17*sqrt(gamma)"))
    for clause, message in problems:
        if strict:
            raise PreconditionError(clause, message)
        logger.warning(f"Path embedding precondition not met: {clause}: {message}")

    first = start if start is not None else min(gexp.vertices)
    emb = Embedding()
    emb.place(0, first)
    into_image = {w: 1 for w in gexp.neighbors(first)}
    for step in range(1, k):
        end = emb.map[step - 1]
        free = sorted(gexp.neighbors(end) - emb.image)
        fits = [
            u
            for u in free
            if all(_below_sqrt(into_image.get(w, 0) + 1, gamma, k) for w in gexp.neighbors(u))
        ]
        disqualified = len(free) - len(fits)
        if disqualified * disqualified > 256 * gamma * k * k:
            message = f"step {step}: {disqualified} neighbours disqualified, above 16*sqrt(gamma)*k"
            if strict:
                raise InvariantViolation(message)
            logger.debug(message)
        if fits:
            chosen = fits[0]
        elif free and not strict:
            chosen = free[0]
        elif strict:
            raise InvariantViolation(f"look-ahead path embedding got stuck at step {step}")
        else:
            logger.info(f"Path embedding stuck at step {step}")
            return None
        emb.place(step, chosen)
        for w in gexp.neighbors(chosen):
            into_image[w] = into_image.get(w, 0) + 1
        worst = max(into_image.values(), default=0)
        emb.trace.append(
            {"step": step, "vertex": chosen, "disqualified": disqualified, "max_degree_into_image": worst}
        )
        if strict and not _below_sqrt(worst, gamma, k):
            raise InvariantViolation(f"look-ahead inequality broken at step {step}")
    emb.active = None
    return emb


# -- shrubs through the avoiding set -----------------------------------


def _fill_inside(shrub: RootedTree, root_image: int, spot_edges: Graph, blocked: set[int]) -> dict[int, int] | None:
    placed = {shrub.root: root_image}
    taken = set(blocked) | {root_image}
    for v in shrub.bfs_order()[1:]:
        host = placed[shrub.parent[v]]
        free = sorted(spot_edges.neighbors(host) - taken) if host in spot_edges.vertices else []
        if not free:
            return None
        placed[v] = free[0]
        taken.add(free[0])
    return placed


def embed_shrub_avoiding(
    shrub: RootedTree,
    g: Graph,
    fam: SpotFamily,
    avoiding: Iterable[int],
    anchor: int,
    used: Iterable[int],
    params: EmbedParams,
) -> Embedding | None:
    """Embed a shrub whose parent sits on ``anchor``, rooting it in a non-exceptional vertex of 𝔼.

    The root goes to a neighbour x of the anchor in 𝔼 - used lying in a spot D
    with |used ∩ V(D)| ≤ γ²k; the rest is filled greedily along D's edges.
    """
    k, gamma = params.k, params.gamma
    members = frozenset(avoiding)
    blocked = set(used) | {anchor}
    g.check_subset([anchor], "anchor")
    if params.strict and shrub.order > params.tau * k:
        raise PreconditionError("shrub_order", f"shrub order {shrub.order} exceeds tau*k = {params.tau * k}")
    reach = g.deg_into(anchor, members - blocked)
    if params.strict and reach < gamma * k:
        raise PreconditionError("anchor_degree", f"anchor has {reach} free avoiding neighbours, below gamma*k")

    cap = gamma**2 * k
    for x in sorted(g.neighbors(anchor) & (members - blocked)):
        for i in fam.containing(x):
            spot = fam.spots[i]
            if len(blocked & spot.vertices) > cap:
                continue
            inside = Graph(g.n, spot.f, spot.vertices)
            placed = _fill_inside(shrub, x, inside, blocked)
            if placed is not None:
                emb = Embedding(map=placed)
                emb.trace.append({"root_image": x, "spot": i})
                return emb
    logger.info(f"No non-exceptional avoiding neighbour of {anchor} could host the shrub")
    return None


# -- shrub-by-shrub embedding with a reserve ---------------------------


@dataclass
class _ReserveAttempt:
    t: RootedTree
    gexp: Graph
    seeds: VertexSet
    params: EmbedParams
    rng: random.Random
    emb: Embedding = field(default_factory=Embedding)

    def _free(self, host: int) -> list[int]:
        return sorted(self.gexp.neighbors(host) - self.emb.image)

    def embed_cut(self, cut: list[int]) -> bool:
        for v in cut:
            p = self.t.parent[v]
            if p < 0:
                options = sorted(self.seeds - self.emb.image)
            else:
                options = [x for x in self._free(self.emb.map[p]) if x in self.seeds]
            if not options:
                return False
            self.emb.place(v, self.rng.choice(options))
        return True

    def embed_shrub(self, shrubs: ShrubDecomposition, index: int) -> bool:
        shrub = shrubs.shrubs[index]
        p = self.params
        limit = Fraction(p.rho * p.k, p.lookahead_divisor)
        root = shrub.root
        parent_host = self.emb.map[self.t.parent[root]]
        options = self._free(parent_host)
        if not options:
            return False
        chosen = self.rng.choice(options)
        from_reserve = chosen in self.emb.reserve
        self.emb.reserve.discard(chosen)
        self.emb.place(root, chosen)
        snapshot = set(self.emb.image)

        for v in self.t.bfs_order():
            if v not in shrub.vertices:
                continue
            kids = [c for c in self.t.children(v) if c in shrub.vertices]
            if not kids:
                continue
            host = self.emb.map[v]
            avoid = snapshot | self.emb.reserve
            candidates = [
                x
                for x in self._free(host)
                if x not in self.emb.reserve and self.gexp.deg_into(x, avoid) < limit
            ]
            if len(candidates) < len(kids) and not p.strict:
                candidates = [x for x in self._free(host) if x not in self.emb.reserve]
            if len(candidates) < len(kids):
                return False
            if len(candidates) >= 2 * len(kids):
                picked = self.rng.sample(candidates, 2 * len(kids))
                hosts, spare = picked[: len(kids)], picked[len(kids) :]
                self.emb.reserve.update(spare)
            else:
                hosts = self.rng.sample(candidates, len(kids))
            for c, x in zip(kids, hosts):
                self.emb.place(c, x)

        margin = len(self.gexp.neighbors(chosen) - self.emb.image)
        self.emb.trace.append(
            {
                "shrub": index,
                "root": root,
                "root_image": chosen,
                "from_reserve": from_reserve,
                "free_degree": margin,
                "reserve": len(self.emb.reserve),
            }
        )
        return True


def _check_reserve_preconditions(t: RootedTree, gexp: Graph, seeds: VertexSet, params: EmbedParams) -> None:
    k = params.k
    if t.maxdeg() > 3:
        raise PreconditionError("maxdeg", f"tree maxdeg {t.maxdeg()} exceeds 3")
    if 2**params.q > params.rho * k:
        raise PreconditionError("q", f"2^q = {2 ** params.q} exceeds rho*k = {params.rho * k}")
    if not seeds:
        raise PreconditionError("seeds", "seed set is empty")
    if not seeds <= gexp.vertices:
        raise PreconditionError("seeds", "seed set leaves the host")
    low = min(gexp.degree(v) for v in seeds)
    if low < params.delta * k:
        raise PreconditionError("seeds", f"seed mindeg {low} is below delta*k = {params.delta * k}")
    problems = []
    nowhere, mode = certify_nowhere_dense(gexp, params.gamma * k, params.gamma)
    if not nowhere:
        problems.append(("nowhere_dense", f"host contains a dense spot ({mode} finder)"))
    if gexp.mindeg() <= params.rho * k:
        problems.append(("mindeg", f"host mindeg {gexp.mindeg()} is not above rho*k"))
    for clause, message in problems:
        if params.strict:
            raise PreconditionError(clause, message)
        logger.warning(f"Reserve embedding precondition not met: {clause}: {message}")


def embed_tree_reserve(t: RootedTree, gexp: Graph, seeds: Iterable[int], params: EmbedParams) -> Embedding | None:
    """Embed the top q levels into the seed set, then each end shrub with a random reserve.

    Each extension draws twice as many admissible candidates as there are
    children, hosts the children on a random half and reserves the rest;
    reserve vertices may only host shrub roots. The free degree of each root
    image is compared with δk/2 - 2h at the end of the run.
    """
    seed_set = frozenset(seeds)
    _check_reserve_preconditions(t, gexp, seed_set, params)
    depth = t.depth()
    cut = [v for v in t.bfs_order() if depth[v] < params.q]
    shrubs = split_at(t, cut)
    order = sorted(range(len(shrubs.shrubs)), key=lambda i: shrubs.shrubs[i].root)
    h = len(shrubs.shrubs)
    threshold = params.delta * params.k / 2 - 2 * h

    for attempt in range(params.retries):
        run = _ReserveAttempt(t, gexp, seed_set, params, random.Random(params.seed * 1009 + attempt))
        if not run.embed_cut(cut):
            logger.debug(f"Attempt {attempt}: cut vertices could not be placed")
            continue
        if not all(run.embed_shrub(shrubs, i) for i in order):
            logger.debug(f"Attempt {attempt}: a shrub could not be completed")
            continue
        emb = run.emb
        emb.active = None
        image = emb.image
        for entry in emb.trace:
            final = len(gexp.neighbors(entry["root_image"]) - image)
            entry["final_free_degree"] = final
            entry["magic_ok"] = final >= threshold
        emb.trace.append({"attempt": attempt, "threshold": str(threshold), "shrubs": h})
        if not all(e.get("magic_ok", True) for e in emb.trace):
            logger.warning(f"Root free-degree margin fell below {threshold}")
        return emb
    logger.info(f"Reserve embedding failed after {params.retries} attempts")
    return None
