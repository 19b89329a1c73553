#!/usr/bin/env python3
"""
Integration tests for the HTTP service
"""

import logging

import pytest
from fastapi.testclient import TestClient

from sparsedecomp import __version__
from sparsedecomp.server import create_app
from sparsedecomp.tools.generators import complete_graph, star_graph
from tests.fixtures.graphs import desk_params

logger = logging.getLogger(__name__)


@pytest.fixture(scope="module")
def client() -> TestClient:
    return TestClient(create_app())


@pytest.fixture
def params_json():
    return desk_params().model_dump(mode="json", by_alias=True)


def test_health(client):
    """Test the health endpoint"""
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "version": __version__}


def test_generate(client):
    """Test graph generation over HTTP"""
    response = client.post("/generate", json={"generator": {"kind": "complete", "n": 4}})
    assert response.status_code == 200
    assert response.json()["n"] == 4
    assert len(response.json()["edges"]) == 6


def test_decompose_then_verify(client, bicliques, params_json):
    """Test a decomposition round trip through the service"""
    graph = bicliques.to_dict()
    response = client.post("/decompose", json={"graph": graph, "params": params_json})
    assert response.status_code == 200
    decomposition = response.json()
    assert decomposition["kind"] == "bounded"
    assert len(decomposition["clusters"]) == 32

    response = client.post("/verify", json={"graph": graph, "decomposition": decomposition})
    assert response.status_code == 200
    assert response.json()["summary"]["all_passed"]


def test_embed_greedy(client):
    """Test a greedy embedding over HTTP"""
    payload = {"graph": complete_graph(4).to_dict(), "tree": {"parent": [-1, 0, 1]}}
    response = client.post("/embed", json=payload)
    assert response.status_code == 200
    assert response.json()["success"]


def test_precondition_maps_to_422(client, params_json):
    """Test that a failed hypothesis returns 422 with the clause"""
    response = client.post("/decompose", json={"graph": star_graph(30).to_dict(), "params": params_json})
    assert response.status_code == 422
    assert response.json()["error"]["clause"] == "maxdeg"


def test_input_error_maps_to_400(client):
    """Test that a malformed decomposition returns 400"""
    response = client.post("/verify", json={"graph": complete_graph(3).to_dict(), "decomposition": {}})
    assert response.status_code == 400
    assert response.json()["error"]["type"] == "InputError"


def test_request_validation(client):
    """Test that an unknown generator kind is rejected by request validation"""
    response = client.post("/generate", json={"generator": {"kind": "nope"}})
    assert response.status_code == 422
