import json

import pytest
from fastapi.testclient import TestClient

from dml_engine.service import ServiceConfig, create_app, load_service_config

from conftest import GOAL_NAME


@pytest.fixture
def client():
    return TestClient(create_app(ServiceConfig()))


@pytest.fixture
def loaded(client, fixture_text):
    response = client.post("/model", content=fixture_text)
    assert response.status_code == 201
    return client


COUNTS = {
    "goals": 1,
    "functions": 4,
    "subfunctions": 9,
    "components": 19,
    "gates": 33,
    "success_conditions": 39,
}


class TestModelEndpoints:
    def test_healthz(self, client):
        assert client.get("/healthz").status_code == 200

    def test_post_model_returns_counts(self, client, fixture_text):
        response = client.post("/model", content=fixture_text)
        assert response.status_code == 201
        assert response.json() == COUNTS

    def test_post_invalid_model_returns_report(self, client, fixture_text):
        doc = json.loads(fixture_text)
        del doc["Goal"]["achieved_by"]["functions"][0]["depends_on"]["gate"]
        response = client.post("/model", content=json.dumps(doc))
        assert response.status_code == 422
        body = response.json()
        assert body["verdict"] == "Fail"
        assert any(i["code"] == "GATE_MISSING" for i in body["issues"])

    def test_post_unparseable_model(self, client):
        response = client.post("/model", content="{not json")
        assert response.status_code == 422
        assert response.json()["verdict"] == "Fail"

    def test_get_model_round_trips(self, loaded, fixture_text):
        served = loaded.get("/model")
        assert served.status_code == 200
        reload = loaded.post("/model", content=served.text)
        assert reload.status_code == 201
        assert reload.json() == COUNTS

    def test_counts_endpoint(self, loaded):
        assert loaded.get("/model/counts").json() == COUNTS

    def test_cypher_endpoint(self, loaded):
        response = loaded.get("/model/cypher")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/plain")
        assert len(response.text.splitlines()) == 209

    def test_no_model_conflict(self, client):
        for call in (
            lambda: client.get("/model"),
            lambda: client.get("/model/counts"),
            lambda: client.post("/propagate"),
            lambda: client.post("/pathsets", json={"target": "x"}),
        ):
            response = call()
            assert response.status_code == 409
            assert response.json()["code"] == "NO_MODEL"


class TestEvidenceEndpoints:
    def test_put_merges_and_bumps_revision(self, loaded, cst2_evidence):
        r1 = loaded.put("/evidence", json=cst2_evidence)
        assert r1.status_code == 200
        r2 = loaded.put("/evidence", json={})
        assert r2.json()["revision"] == r1.json()["revision"] + 1

    def test_bad_sum_is_prior_sum_422(self, loaded):
        response = loaded.put(
            "/evidence",
            json={"CST-2": {"operational": 0.6, "degraded": 0.3, "failed": 0.0}},
        )
        assert response.status_code == 422
        assert response.json()["code"] == "PRIOR_SUM"

    def test_unknown_component_422(self, loaded):
        response = loaded.put("/evidence", json={"Pump-99": {"on": 1.0}})
        assert response.status_code == 422
        assert response.json()["code"] == "UNKNOWN_COMPONENT"

    def test_delete_resets(self, loaded, cst2_evidence):
        loaded.put("/evidence", json=cst2_evidence)
        loaded.delete("/evidence")
        rows = loaded.post("/propagate").json()
        goal = next(r for r in rows if r["kind"] == "Goal")
        assert not goal["impacted"]


class TestPropagateAndPathsets:
    def test_cst2_scenario(self, loaded, cst2_evidence):
        loaded.put("/evidence", json=cst2_evidence)
        rows = loaded.post("/propagate").json()
        impacted = {r["name"] for r in rows if r["impacted"]}
        assert {GOAL_NAME, "Supply Feedwater", "Manage Condensation Tanks"} <= impacted

    def test_threshold_override(self, loaded, cst2_evidence):
        loaded.put("/evidence", json=cst2_evidence)
        rows = loaded.post("/propagate", json={"threshold": 0.0}).json()
        assert not any(r["impacted"] for r in rows)

    def test_pathsets_payload_shape(self, loaded):
        response = loaded.post("/pathsets", json={"target": "Manage Condensation Tanks"})
        body = response.json()
        assert body["source"] == "Manage Condensation Tanks"
        assert body["minimized"] is True
        assert body["count"] == 1
        assert body["truncated"] is False
        assert len(body["pathsets"][0]) == 6

    def test_pathsets_leaf_target_400(self, loaded):
        response = loaded.post(
            "/pathsets", json={"target": "CST-1/Maintains appropriate water level"}
        )
        assert response.status_code == 400
        assert response.json()["code"] == "TARGET_IS_LEAF"

    def test_pathsets_limit_guard(self, loaded):
        response = loaded.post(
            "/pathsets", json={"target": "Supply Feedwater", "limit": 2}
        )
        assert response.status_code == 422
        assert response.json()["code"] == "PATHSET_EXPLOSION"

    def test_subgraph_endpoint(self, loaded):
        response = loaded.get(
            "/model/subgraph", params={"target": GOAL_NAME, "depth": 1}
        )
        body = response.json()
        assert body["target"] == GOAL_NAME
        assert len(body["nodes"]) == 6
        kinds = {n["kind"] for n in body["nodes"]}
        assert kinds == {"Goal", "Function", "AND_gate"}

    def test_subgraph_includes_probabilities_when_fresh(self, loaded, cst2_evidence):
        loaded.put("/evidence", json=cst2_evidence)
        loaded.post("/propagate")
        body = loaded.get(
            "/model/subgraph", params={"target": "Manage Condensation Tanks", "depth": 1}
        ).json()
        sf = next(n for n in body["nodes"] if n["name"] == "Manage Condensation Tanks")
        assert sf["p_success"] == 0.0
        assert sf["impacted"] is True

    def test_subgraph_unknown_target_404(self, loaded):
        response = loaded.get("/model/subgraph", params={"target": "Pump-99"})
        assert response.status_code == 404
        assert response.json()["code"] == "NOT_FOUND"


class TestReproducibility:
    def test_restart_reproduces_responses(self, fixture_text, cst2_evidence):
        def run_sequence():
            client = TestClient(create_app(ServiceConfig()))
            client.post("/model", content=fixture_text)
            client.put("/evidence", json=cst2_evidence)
            return (
                client.post("/propagate").content,
                client.post("/pathsets", json={"target": "Supply Feedwater"}).content,
                client.get("/model/cypher").content,
                client.get("/model").content,
            )

        assert run_sequence() == run_sequence()


class TestConfig:
    def test_defaults(self):
        config = load_service_config(None)
        assert config.port == 8080
        assert config.pathset_limit == 10_000

    def test_file_and_env(self, tmp_path, monkeypatch):
        path = tmp_path / "svc.json"
        path.write_text(json.dumps({"port": 9999, "threshold": 0.5}))
        config = load_service_config(str(path))
        assert config.port == 9999 and config.threshold == 0.5
        monkeypatch.setenv("DML_ENGINE_CONFIG", str(path))
        assert load_service_config(None).port == 9999

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "svc.json"
        path.write_text(json.dumps({"bogus": 1}))
        with pytest.raises(ValueError):
            load_service_config(str(path))

    def test_invalid_port_rejected(self):
        with pytest.raises(ValueError):
            ServiceConfig(port=0)

    def test_preload_model(self, fixture_path):
        config = ServiceConfig(model_path=str(fixture_path))
        client = TestClient(create_app(config))
        assert client.get("/model/counts").json() == COUNTS
