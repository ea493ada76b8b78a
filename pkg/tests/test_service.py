from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from epsmult.service import create_app


@pytest.fixture
def client(tmp_path):
    return TestClient(create_app(cache_dir=str(tmp_path / "cache")))


IDEAL_REQ = {
    "instance": {"variables": ["x", "y"], "generators": ["x^2", "x*y"]},
    "params": {"n_max": 10},
}


class TestHealth:
    def test_health(self, client):
        resp = client.get("/v1/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok", "format_version": "1"}


class TestEpsilonEndpoints:
    def test_ideal(self, client):
        resp = client.post("/v1/epsilon/ideal", json=IDEAL_REQ)
        assert resp.status_code == 200
        report = resp.json()["report"]
        assert report["case"] == "ideal"
        assert report["stabilization"]["c0"] == 2
        assert report["sequence"]["values"] == [0, 1, 3, 6, 10, 15, 21, 28, 36, 45, 55]

    def test_pair(self, client):
        resp = client.post(
            "/v1/epsilon/pair",
            json={
                "instance": {
                    "base_variables": ["x", "y"],
                    "fiber_variables": ["t"],
                    "delta": [],
                    "subalgebra_generators": ["x^2*t", "x*y*t"],
                },
                "params": {"n_max": 8},
            },
        )
        assert resp.status_code == 200
        assert resp.json()["report"]["case"] == "pair"

    def test_module(self, client):
        resp = client.post(
            "/v1/epsilon/module",
            json={
                "instance": {
                    "variables": ["x", "y"],
                    "rank": 2,
                    "generators": [["x", 1], ["y", 2]],
                },
                "params": {"n_max": 8},
            },
        )
        assert resp.status_code == 200
        report = resp.json()["report"]
        assert report["case"] == "module"
        assert all(v == 0 for v in report["sequence"]["values"])
        assert report["extrapolation"]["estimate"]["rational"] == "0/1"

    def test_field(self, client):
        resp = client.post(
            "/v1/epsilon/field",
            json={
                "instance": {
                    "base_variables": [],
                    "fiber_variables": ["y1", "y2"],
                    "delta": [],
                    "subalgebra_generators": ["y1"],
                },
                "params": {"n_max": 10},
            },
        )
        assert resp.status_code == 200
        report = resp.json()["report"]
        assert report["sequence"]["values"] == list(range(11))
        assert report["extrapolation"]["estimate"]["rational"] == "1/1"

    def test_determinism_across_requests(self, client):
        a = client.post("/v1/epsilon/ideal", json=IDEAL_REQ).json()
        b = client.post("/v1/epsilon/ideal", json=IDEAL_REQ).json()
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestErrorMapping:
    def test_hypothesis_refusal_409(self, client):
        resp = client.post(
            "/v1/epsilon/pair",
            json={
                "instance": {
                    "base_variables": ["x"],
                    "fiber_variables": ["y1", "y2"],
                    "delta": ["x*y1"],
                    "subalgebra_generators": ["x*y2"],
                }
            },
        )
        assert resp.status_code == 409
        body = resp.json()
        assert body["error_code"] == "hypothesis-refused"
        assert "y1" in body["witness"]

    def test_ingestion_error_422(self, client):
        resp = client.post(
            "/v1/epsilon/ideal",
            json={"instance": {"variables": ["x"], "generators": ["q^2"]}},
        )
        assert resp.status_code == 422
        assert resp.json()["error_code"] == "ingestion-error"

    def test_field_with_base_rejected(self, client):
        resp = client.post(
            "/v1/epsilon/field",
            json={
                "instance": {
                    "base_variables": ["x"],
                    "fiber_variables": ["t"],
                    "delta": [],
                    "subalgebra_generators": ["x*t"],
                }
            },
        )
        assert resp.status_code == 422

    def test_budget_exceeded_400(self, client):
        req = {
            "instance": {"variables": ["x", "y"], "generators": ["x^2", "x*y"]},
            "params": {"n_max": 30, "cap": 1},
        }
        resp = client.post("/v1/epsilon/ideal", json=req)
        assert resp.status_code == 400
        assert resp.json()["error_code"] == "budget-exceeded"


class TestSemigroupEndpoints:
    def test_analyze(self, client):
        resp = client.post(
            "/v1/semigroup/analyze", json={"generators": [[0, 1], [1, 1]], "n_max": 10}
        )
        assert resp.status_code == 200
        analysis = resp.json()["analysis"]
        assert analysis["q"] == 1 and analysis["index"] == 1
        assert analysis["counts"][10] == 11

    def test_verify(self, client):
        resp = client.post(
            "/v1/okounkov/verify",
            json={"generators": [[0, 2], [1, 2]], "n_max": 50, "tol": "1/50"},
        )
        assert resp.status_code == 200
        verification = resp.json()["verification"]
        assert verification["passed"] is True
        assert verification["m"] == 2

    def test_degenerate_rejected(self, client):
        resp = client.post("/v1/semigroup/analyze", json={"generators": [[1, 0]]})
        assert resp.status_code == 422
