#!/usr/bin/env python3
"""
sparsedecomp HTTP Service
FastAPI surface over the decomposition runner: generate, decompose, verify and embed.
"""

import json
import logging
from typing import Any, Literal

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .exceptions import SparseDecompError
from .pipeline import DecompositionRunner
from .tools.graph_core import Graph
from .tools.trees import RootedTree
from .utils.config import (
    DecompParams,
    EmbedParams,
    GeneratorSpec,
    LksParams,
    OmegaSequence,
    Rational,
    RunConfig,
)
from .utils.jsonio import dumps
from .utils.logging_config import configure_logging

logger = logging.getLogger(__name__)

_STATUS = {2: 400, 3: 422}


class GraphPayload(BaseModel):
    """Graph JSON: 0-based ids, edges as pairs."""

    n: int = Field(ge=0)
    edges: list[tuple[int, int]] = Field(default_factory=list)
    vertices: list[int] | None = None

    def to_graph(self) -> Graph:
        return Graph.from_dict(self.model_dump(exclude_none=True))


class TreePayload(BaseModel):
    k: int | None = None
    parent: list[int]
    root: int = 0

    def to_tree(self) -> RootedTree:
        return RootedTree.from_dict(self.model_dump(exclude_none=True))


class GenerateRequest(BaseModel):
    generator: GeneratorSpec


class DecomposeRequest(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    graph: GraphPayload
    mode: Literal["bounded", "lks", "generic"] = "bounded"
    params: DecompParams
    lks: LksParams | None = None
    omegas: OmegaSequence | None = None
    eta: Rational | None = None
    debug_trace: bool = False


class VerifyRequest(BaseModel):
    graph: GraphPayload | None = None
    decomposition: dict[str, Any]
    params: DecompParams | None = None
    challenges: list[list[int]] = Field(default_factory=list)


class EmbedRequest(BaseModel):
    graph: GraphPayload
    mode: Literal["greedy", "path", "shrub", "reserve", "sweep"] = "greedy"
    tree: TreePayload | None = None
    decomposition: dict[str, Any] | None = None
    embed: EmbedParams | None = None
    k: int | None = None
    path_len: int | None = None
    anchor: int | None = None
    used: list[int] = Field(default_factory=list)
    seeds: list[int] | None = None
    sweep_k: int | None = None


class HealthResponse(BaseModel):
    status: str
    version: str


def _run(config: RunConfig, **inline: Any) -> dict[str, Any]:
    # round-trip through the canonical encoder so Fractions and sets become JSON
    return json.loads(dumps(DecompositionRunner(config, **inline).run()))


def create_app() -> FastAPI:
    configure_logging("INFO")
    app = FastAPI(title="sparsedecomp", version=__version__)

    @app.exception_handler(SparseDecompError)
    async def _library_error(request: Request, exc: SparseDecompError) -> JSONResponse:
        logger.error(f"Request to {request.url.path} failed: {str(exc)}")
        return JSONResponse(status_code=_STATUS.get(exc.exit_code, 500), content={"error": exc.to_dict()})

    @app.get("/health", response_model=HealthResponse)
    def health() -> dict[str, str]:
        return {"status": "ok", "version": __version__}

    @app.post("/generate")
    def generate(request: GenerateRequest) -> dict[str, Any]:
        return _run(RunConfig(command="generate", generator=request.generator))

    @app.post("/decompose")
    def decompose(request: DecomposeRequest) -> dict[str, Any]:
        config = RunConfig(
            command="decompose",
            mode=request.mode,
            params=request.params,
            lks=request.lks,
            omegas=request.omegas,
            eta=request.eta,
            debug_trace=request.debug_trace,
        )
        return _run(config, graph=request.graph.to_graph())

    @app.post("/verify")
    def verify(request: VerifyRequest) -> dict[str, Any]:
        config = RunConfig(command="verify", params=request.params, challenges=request.challenges)
        graph = request.graph.to_graph() if request.graph is not None else None
        return _run(config, graph=graph, decomposition=request.decomposition)

    @app.post("/embed")
    def embed(request: EmbedRequest) -> dict[str, Any]:
        config = RunConfig(
            command="embed",
            mode=request.mode,
            embed=request.embed,
            k=request.k,
            path_len=request.path_len,
            anchor=request.anchor,
            used=request.used,
            seeds=request.seeds,
            sweep_k=request.sweep_k,
        )
        tree = request.tree.to_tree() if request.tree is not None else None
        return _run(config, graph=request.graph.to_graph(), decomposition=request.decomposition, tree=tree)

    return app
