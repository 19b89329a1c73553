#!/usr/bin/env python3
"""
Decomposition Runner
Coordinates generators, degree gaps, decompositions, verifiers and embeddings for one run.
"""

import logging
from pathlib import Path
from typing import Any

from ..exceptions import InputError
from ..tools.avoiding import challenge_suite
from ..tools.decomposition import (
    BoundedDecomposition,
    SparseDecomposition,
    captured_edges,
    check_dense_degeneration,
    cluster_graph,
    decompose_bounded,
    decompose_generic,
    decompose_sparse_lks,
    uncaptured_report,
)
from ..tools.degree_gap import create_gap_generic, create_gap_lks
from ..tools.dense_spots import check_spot_facts
from ..tools.generators import generate
from ..tools.graph_core import Graph, Partition
from ..tools.lks_class import lks_small_properties
from ..tools.tree_embed import (
    Embedding,
    embed_path_expander,
    embed_shrub_avoiding,
    embed_tree_reserve,
    greedy_embed,
)
from ..tools.trees import RootedTree, all_trees, shrub_decompose
from ..tools.verification import check_avoiding_monotone, verify_bounded, verify_sparse
from ..utils.config import DecompParams, EmbedParams, LksParams, RunConfig
from ..utils.jsonio import read_json, write_json

logger = logging.getLogger(__name__)

DECOMPOSE_MODES = ("bounded", "lks", "generic")
GAP_MODES = ("generic", "lks")
EMBED_MODES = ("greedy", "path", "shrub", "reserve", "sweep")


def _require(value: Any, name: str) -> Any:
    if value is None:
        raise InputError(f"{name} is required for this command")
    return value


class DecompositionRunner:
    """Runs one command of a RunConfig.

    Graphs, decompositions and trees are read from the paths in the config
    unless they are handed over directly (the HTTP surface does that).
    """

    def __init__(
        self,
        config: RunConfig,
        graph: Graph | None = None,
        decomposition: dict[str, Any] | None = None,
        tree: RootedTree | None = None,
    ):
        self.config = config
        self._graph = graph
        self._decomposition = decomposition
        self._tree = tree

    # -- inputs ------------------------------------------------------------

    @property
    def graph(self) -> Graph:
        if self._graph is None:
            path = _require(self.config.input, "--input graph")
            self._graph = Graph.from_dict(read_json(path))
        return self._graph

    @property
    def decomposition_data(self) -> dict[str, Any]:
        if self._decomposition is None:
            path = _require(self.config.decomposition, "--decomposition file")
            data = read_json(path)
            if not isinstance(data, dict):
                raise InputError(f"{path}: decomposition JSON must be an object")
            self._decomposition = data
        return self._decomposition

    @property
    def tree(self) -> RootedTree:
        if self._tree is None:
            path = _require(self.config.tree, "--tree file")
            self._tree = RootedTree.from_dict(read_json(path))
        return self._tree

    def params(self) -> DecompParams:
        """Params stored with the decomposition (sparse runs rewrite Ω*, Ω**, s); else the config's."""
        stored = self.decomposition_data.get("params")
        if stored is None:
            return _require(self.config.params, "decomposition params (config 'params' block)")
        try:
            return DecompParams.model_validate(stored)
        except ValueError as e:
            raise InputError(f"stored decomposition params are invalid: {e}") from e

    def lks(self) -> LksParams:
        """The config's lks block, or one assembled from its k and eta."""
        if self.config.lks is not None:
            return self.config.lks
        return LksParams(k=_require(self.k(), "k"), eta=_require(self.config.eta, "eta"))

    def k(self) -> int | None:
        if self.config.k is not None:
            return self.config.k
        return self.config.params.k if self.config.params is not None else None

    def embed_params(self, k: int) -> EmbedParams:
        if self.config.embed is not None:
            return self.config.embed
        return EmbedParams(k=k, seed=self.config.seed)

    # -- commands ------------------------------------------------------------

    def generate(self) -> dict[str, Any]:
        logger.info("Stage 1: generating graph")
        spec = _require(self.config.generator, "generator spec")
        return generate(spec).to_dict()

    def gap(self) -> dict[str, Any]:
        mode = self.config.mode or "generic"
        omegas = _require(self.config.omegas, "omegas")
        logger.info(f"Stage 1: creating a degree gap ({mode})")
        if mode == "generic":
            eta = _require(self.config.eta, "eta")
            result = create_gap_generic(self.graph, _require(self.k(), "k"), eta, omegas)
        elif mode == "lks":
            result = create_gap_lks(self.graph, self.lks(), omegas)
        else:
            raise InputError(f"unknown gap mode {mode!r}; expected one of {', '.join(GAP_MODES)}")
        data = result.to_dict()
        if mode == "lks":
            data["lks_small"] = lks_small_properties(result.subgraph, self.lks().halved())
        return data

    def decompose(self) -> dict[str, Any]:
        mode = self.config.mode or "bounded"
        params = _require(self.config.params, "params")
        g = self.graph
        logger.info(f"Stage 1: decomposing n={g.order}, e={g.e} ({mode})")
        if mode == "bounded":
            run = decompose_bounded(g, Partition.trivial(g.vertices), params)
            data = {"kind": "bounded", **run.decomposition.to_dict()}
            data["params"] = params.model_dump(mode="json", by_alias=True)
            data["uncaptured"] = run.uncaptured
            if self.config.debug_trace:
                data["trace"] = run.trace.to_dict()
            return data
        omegas = _require(self.config.omegas, "omegas")
        if mode == "lks":
            sparse = decompose_sparse_lks(g, self.lks(), omegas, params)
        elif mode == "generic":
            sparse = decompose_generic(g, _require(self.config.eta, "eta"), omegas, params)
        else:
            raise InputError(f"unknown decompose mode {mode!r}; expected one of {', '.join(DECOMPOSE_MODES)}")
        return {"kind": "sparse", **sparse.to_dict(self.config.debug_trace)}

    def _host_and_decomposition(self) -> tuple[Graph, BoundedDecomposition | SparseDecomposition]:
        data = self.decomposition_data
        host = Graph.from_dict(data["graph"]) if "graph" in data else self.graph
        if data.get("kind") == "sparse" or "huge" in data:
            return host, SparseDecomposition.from_dict(data)
        return host, BoundedDecomposition.from_dict(data)

    def verify(self) -> dict[str, Any]:
        logger.info("Stage 1: loading decomposition")
        g, d = self._host_and_decomposition()
        params = self.params()
        challenges = [frozenset(c) for c in self.config.challenges]
        logger.info("Stage 2: verifying clauses")
        if isinstance(d, SparseDecomposition):
            return verify_sparse(g, d, params, challenges, d.bounded.prepartition)
        report = verify_bounded(g, d, params, challenges, d.prepartition)
        fixed = challenges or challenge_suite(g, d.spots, d.avoiding, params)
        report["avoiding_monotone"] = check_avoiding_monotone(d, params, fixed)
        return report

    def embed(self) -> dict[str, Any]:
        mode = self.config.mode or "greedy"
        g = self.graph
        logger.info(f"Stage 1: embedding ({mode})")
        if mode == "sweep":
            return self._sweep(g)
        emb: Embedding | None
        if mode == "greedy":
            emb = greedy_embed(self.tree, g)
        elif mode == "path":
            length = _require(self.config.path_len or self.config.k, "path_len")
            params = self.embed_params(length)
            emb = embed_path_expander(length, g, params.gamma, params.rho, strict=params.strict)
        elif mode == "shrub":
            d = BoundedDecomposition.from_dict(self.decomposition_data)
            anchor = _require(self.config.anchor, "anchor")
            params = self.embed_params(self.config.k or self.tree.order)
            emb = embed_shrub_avoiding(self.tree, g, d.spots, d.avoiding, anchor, self.config.used, params)
        elif mode == "reserve":
            params = self.embed_params(self.config.k or self.tree.order)
            seeds = self.config.seeds
            if seeds is None:
                seeds = sorted(v for v in g.vertices if g.degree(v) >= params.delta * params.k)
            emb = embed_tree_reserve(self.tree, g, seeds, params)
        else:
            raise InputError(f"unknown embed mode {mode!r}; expected one of {', '.join(EMBED_MODES)}")
        data: dict[str, Any] = {"mode": mode, "success": emb is not None}
        if emb is not None:
            data.update(emb.to_dict())
        return data

    def _sweep(self, g: Graph) -> dict[str, Any]:
        """Greedy embedding of every tree of one order; aggregates success rates."""
        k = _require(self.config.sweep_k or self.config.k, "sweep_k")
        trees = all_trees(k)
        tau = self.embed_params(k).tau
        rows = []
        for t in trees:
            emb = greedy_embed(t, g)
            rows.append(
                {
                    "parent": list(t.parent),
                    "success": emb is not None,
                    "independence_number": t.independence_number(),
                    "shrubs": len(shrub_decompose(t, tau, k).shrubs) if tau * k >= 1 else None,
                }
            )
        successes = sum(1 for r in rows if r["success"])
        return {
            "mode": "sweep",
            "k": k,
            "trees": len(rows),
            "successes": successes,
            "success_rate": f"{successes}/{len(rows)}",
            "results": rows,
        }

    def report(self) -> dict[str, Any]:
        """Category mass report, dense degeneration check and formal constants."""
        logger.info("Stage 1: loading decomposition")
        g, d = self._host_and_decomposition()
        params = self.params()
        s = d if isinstance(d, SparseDecomposition) else SparseDecomposition(frozenset(), d)
        bounded = s.bounded
        rest = g.remove_vertices(s.huge)

        logger.info("Stage 2: measuring categories")
        captured = captured_edges(g, s)
        clusters = cluster_graph(bounded, params.gamma, params)
        mass = {
            "huge": len(s.huge),
            "avoiding": len(bounded.avoiding),
            "clusters": len(bounded.clusters),
            "cluster_size": bounded.cluster_size,
            "g_reg_edges": bounded.g_reg.e,
            "g_exp_edges": bounded.g_exp.e,
            "g_exp_vertices": bounded.g_exp.order,
            "spots": len(bounded.spots.spots),
            "spot_edges": bounded.spots.captured_graph.e,
            "captured_edges": captured.e,
            "edges": g.e,
        }
        data: dict[str, Any] = {
            "kind": "sparse" if isinstance(d, SparseDecomposition) else "bounded",
            "mass": mass,
            "uncaptured": uncaptured_report(rest, bounded, params),
            "cluster_graph": {
                **clusters.to_dict(),
                "degree_bound_holds": clusters.degree_bound_holds(),
                "spot_reach_holds": clusters.spot_reach_holds(),
            },
            "spot_facts": check_spot_facts(
                rest, bounded.spots, params.omega_star, params.gamma, params.k
            ),
            "relation_warnings": params.relation_warnings(),
            "formal_constants": params.formal_constants(),
        }
        if self.config.dense_c is not None:
            logger.info("Stage 3: dense degeneration check")
            data["dense_degeneration"] = check_dense_degeneration(
                g, s, params, self.config.dense_c, self.config.dense_a
            )
        return data

    # -- dispatch ------------------------------------------------------------

    def run(self) -> dict[str, Any]:
        handlers = {
            "generate": self.generate,
            "gap": self.gap,
            "decompose": self.decompose,
            "verify": self.verify,
            "embed": self.embed,
            "report": self.report,
        }
        try:
            result = handlers[self.config.command]()
        except Exception as e:
            logger.error(f"{self.config.command.capitalize()} failed: {str(e)}")
            raise
        if self.config.output:
            path = write_json(Path(self.config.output), result)
            logger.info(f"Wrote {path}")
        return result
