"""Tests for src/service/api.py"""

import math
from unittest.mock import patch

import pytest
from fastapi.testclient import TestClient

from src.service.api import app

# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


@pytest.fixture()
def client():
    with TestClient(app) as c:
        yield c


# ---------------------------------------------------------------------------
# Health and metrics
# ---------------------------------------------------------------------------


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert body["version"]


def test_metrics_count_requests_and_verdicts(client):
    client.get("/lmatrix", params={"j1": "1/2", "j2": "1/2"})
    client.post("/classify", json={"N": 4, "p": [0.375, 0.0, 0.625]})
    response = client.get("/metrics")
    assert response.status_code == 200
    text = response.text
    assert 'spininv_requests_total{endpoint="lmatrix"}' in text
    assert 'spininv_verdicts_total{verdict="PptEntangled"}' in text
    assert "spininv_request_latency_seconds_bucket" in text


# ---------------------------------------------------------------------------
# Wigner symbols and L matrix
# ---------------------------------------------------------------------------


class TestWigner:
    def test_clebsch_gordan(self, client):
        response = client.get("/wigner/cg", params={"args": "1/2,1/2,1/2,-1/2,0,0"})
        assert response.status_code == 200
        record = response.json()
        assert record["command"] == "wigner cg"
        assert record["results"]["exact"] == "+√(1/2)"

    def test_selection_zero_is_reported(self, client):
        response = client.get("/wigner/3j", params={"args": "1,1,3,0,0,0"})
        assert response.status_code == 200
        results = response.json()["results"]
        assert results["exact"] == "0"
        assert "triangle rule fails for (j1, j2, j3)" in results["selection_rules"]

    @pytest.mark.parametrize(
        "kind, args",
        [("9j", "0,0,0,0,0,0"), ("3j", "1,1,1"), ("3j", "0.5,0.5,1,0.5,-0.5,0")],
    )
    def test_bad_input_is_400(self, client, kind, args):
        response = client.get(f"/wigner/{kind}", params={"args": args})
        assert response.status_code == 400
        assert response.json()["detail"]

    def test_missing_args_is_422(self, client):
        assert client.get("/wigner/3j").status_code == 422


class TestLMatrix:
    def test_two_qubits(self, client):
        response = client.get("/lmatrix", params={"j1": "1/2", "j2": "1/2"})
        assert response.status_code == 200
        results = response.json()["results"]
        assert results["agree"] is True
        assert results["matrix"][1] == pytest.approx([-math.sqrt(3) / 2, 0.5])

    def test_unknown_method(self, client):
        response = client.get(
            "/lmatrix", params={"j1": "1", "j2": "1", "method": "guess"}
        )
        assert response.status_code == 400
        assert "method" in response.json()["detail"]

    def test_internal_error_is_500(self, client):
        with patch("src.service.api.cmd_lmatrix", side_effect=RuntimeError("boom")):
            response = client.get("/lmatrix", params={"j1": "1", "j2": "1"})
        assert response.status_code == 500
        assert response.json()["detail"] == "boom"


# ---------------------------------------------------------------------------
# Geometry and classification
# ---------------------------------------------------------------------------


class TestGeometry:
    def test_even_n(self, client):
        response = client.get("/geometry/4")
        assert response.status_code == 200
        results = response.json()["results"]
        assert set(results["points"]) == {"A", "B", "C", "A'", "D", "E", "F"}
        assert results["separable_region"]["kind"] == "polygon-plus-curve"

    def test_sampled(self, client):
        response = client.get("/geometry/5", params={"samples": 50, "seed": 1})
        assert response.status_code == 200
        record = response.json()
        assert record["seed"] == 1
        assert len(record["results"]["cloud"]["points"]) == 50

    def test_samples_without_seed(self, client):
        response = client.get("/geometry/4", params={"samples": 50})
        assert response.status_code == 400
        assert "seed" in response.json()["detail"]

    def test_small_n(self, client):
        assert client.get("/geometry/2").status_code == 400


class TestClassify:
    def test_ppt_entangled(self, client):
        response = client.post("/classify", json={"N": 4, "p": [0.375, 0.0, 0.625]})
        assert response.status_code == 200
        results = response.json()["results"]
        assert results["verdict"] == "PptEntangled"
        assert results["inequalities"]["witness"] == pytest.approx(-1 / 12)

    def test_beta_input(self, client):
        response = client.post("/classify", json={"N": 4, "beta": [0.0, 0.0]})
        assert response.status_code == 200
        assert response.json()["results"]["verdict"] == "Separable"

    def test_not_a_state_is_a_verdict(self, client):
        response = client.post("/classify", json={"N": 4, "beta": [3.0, 3.0]})
        assert response.status_code == 200
        assert response.json()["results"]["verdict"] == "NotAState"

    @pytest.mark.parametrize(
        "body",
        [
            {"N": 4},
            {"N": 4, "p": [0.5, 0.5, 0.5]},
            {"N": 4, "p": [0.2, 0.3, 0.5], "beta": [0.0, 0.0]},
            {"N": 4, "beta": [0.0, 0.0], "samples": 10},
        ],
    )
    def test_invalid_requests(self, client, body):
        assert client.post("/classify", json=body).status_code == 400

    def test_malformed_body(self, client):
        assert client.post("/classify", json={"p": [0.2, 0.3, 0.5]}).status_code == 422
