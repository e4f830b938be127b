import json
import threading

import pytest
from fastapi.testclient import TestClient

from reqplan.project_io import fixture_path
from reqplan.service import create_app


def _fixture_json(name):
    return json.loads(fixture_path(name).read_text())


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def loaded(client):
    response = client.put("/project", json=_fixture_json("release_planning.json"))
    assert response.status_code == 200
    return client, response.json()["version"]


def test_get_before_put_is_404(client):
    assert client.get("/project").status_code == 404


def test_put_then_get_round_trips(client):
    raw = _fixture_json("keyword_match.json")
    version = client.put("/project", json=raw).json()["version"]
    assert version == 1
    snapshot = client.get("/project").json()
    assert snapshot["version"] == 1
    assert [r["id"] for r in snapshot["project"]["requirements"]] == \
        ["req1", "req2", "req3", "req4", "req5"]


def test_put_increments_version(client):
    raw = _fixture_json("keyword_match.json")
    assert client.put("/project", json=raw).json()["version"] == 1
    assert client.put("/project", json=raw).json()["version"] == 2


def test_stale_if_match_conflicts(client):
    raw = _fixture_json("keyword_match.json")
    client.put("/project", json=raw)
    response = client.put("/project", json=raw, headers={"If-Match": "7"})
    assert response.status_code == 409
    assert response.json()["current_version"] == 1


def test_put_validation_lists_issues(client):
    raw = _fixture_json("early_re.json")
    raw["evaluations"]["relevance"]["req1"]["user1"] = 25
    response = client.put("/project", json=raw)
    assert response.status_code == 422
    assert response.json()["issues"][0]["rule"] == "rating-out-of-range"


def test_malformed_body_is_400(client):
    response = client.put("/project", content=b"{not json",
                          headers={"content-type": "application/json"})
    assert response.status_code == 400


def test_unknown_route_is_404(client):
    assert client.post("/analyze/summon").status_code == 404


def test_assign_analysis_reproduces_similarities(client):
    client.put("/project", json=_fixture_json("keyword_match.json"))
    response = client.post("/analyze/assign")
    assert response.status_code == 200
    body = response.json()
    assert body["project_version"] == 1
    assert body["result"]["similarity"]["req3"]["user3"] == pytest.approx(1.0)
    assert body["result"]["similarity"]["req1"]["user1"] == pytest.approx(0.4)
    assert "elapsed_ms" in body and "engine_version" in body


def test_analysis_is_repeatable(loaded):
    client, _ = loaded
    first = client.post("/analyze/conflicts").json()["result"]
    second = client.post("/analyze/conflicts").json()["result"]
    assert first == second


def test_patch_preference_shrinks_conflicts(loaded):
    client, version = loaded
    before = client.post("/analyze/conflicts").json()["result"]
    assert before["count"] == 2
    response = client.patch(
        "/project/preferences",
        json={"stakeholder": "user1",
              "constraints": [{"requirement": "req5", "op": "=", "value": 1}]},
        headers={"If-Match": str(version)})
    assert response.status_code == 200
    after = client.post("/analyze/conflicts").json()["result"]
    assert after["count"] == 1
    texts = [c["text"] for conflict in after["conflicts"]
             for c in conflict["constraints"]]
    assert texts == ["user1: req3.rel <= 2"]


def test_patch_with_stale_version_conflicts(loaded):
    client, version = loaded
    body = {"stakeholder": "user1",
            "constraints": [{"requirement": "req5", "op": "=", "value": 1}]}
    ok = client.patch("/project/preferences", json=body,
                      headers={"If-Match": str(version)})
    assert ok.status_code == 200
    stale = client.patch("/project/preferences", json=body,
                         headers={"If-Match": str(version)})
    assert stale.status_code == 409


def test_concurrent_patches_one_wins(loaded):
    client, version = loaded
    results = []

    def fire():
        response = client.patch(
            "/project/preferences",
            json={"stakeholder": "user2",
                  "constraints": [{"requirement": "req4", "op": ">=", "value": 2}]},
            headers={"If-Match": str(version)})
        results.append(response.status_code)

    threads = [threading.Thread(target=fire) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(results) == [200, 409]


def test_patch_evaluation_cell(client):
    client.put("/project", json=_fixture_json("early_re.json"))
    response = client.patch(
        "/project/preferences",
        json={"evaluation": {"stakeholder": "user1", "requirement": "req1",
                             "dimension": "relevance", "rating": 9}})
    assert response.status_code == 200
    snapshot = client.get("/project").json()
    assert snapshot["project"]["evaluations"]["relevance"]["req1"]["user1"] == 9.0


def test_patch_rejects_bad_rating(client):
    client.put("/project", json=_fixture_json("early_re.json"))
    response = client.patch(
        "/project/preferences",
        json={"evaluation": {"stakeholder": "user1", "requirement": "req1",
                             "dimension": "relevance", "rating": 25}})
    assert response.status_code == 422


def test_patch_assignments(client):
    client.put("/project", json=_fixture_json("basic_planning.json"))
    response = client.patch(
        "/project/preferences",
        json={"stakeholder": "user1", "assignments": {"req5": 1}})
    assert response.status_code == 200
    result = client.post("/analyze/consensus").json()["result"]
    # oracle-recomputed optimum once user1 agrees with the req5 majority
    assert result["plan"] == {"req1": 1, "req2": 3, "req3": 3, "req4": 2, "req5": 1}
    assert result["change_counts"] == {"user1": 2, "user2": 1,
                                       "user3": 1, "user4": 1}


def test_partial_wish_matrix_is_422_not_500(client):
    client.put("/project", json=_fixture_json("early_re.json"))
    client.patch("/project/preferences",
                 json={"stakeholder": "user1", "assignments": {"req1": 1}})
    client.patch("/project/preferences",
                 json={"stakeholder": "user2", "assignments": {"req2": 1}})
    response = client.post("/analyze/consensus")
    assert response.status_code == 422
    assert "missing" in response.json()["error"]


def test_bad_config_override_is_400(client):
    client.put("/project", json=_fixture_json("sparse_ratings.json"))
    response = client.post("/analyze/complete",
                           json={"config": {"factorization": {"k": 0}}})
    assert response.status_code == 400


def test_plan_unsat_is_200(client):
    raw = _fixture_json("release_planning.json")
    raw["hard_constraints"].append(
        {"kind": "BEFORE", "req_a": "req3", "req_b": "req1"})
    client.put("/project", json=raw)
    response = client.post("/analyze/plan")
    assert response.status_code == 200
    assert response.json()["result"]["status"] == "UNSAT"


def test_analyze_config_override(client):
    client.put("/project", json=_fixture_json("early_re.json"))
    divided = client.post("/analyze/prioritize").json()["result"]
    weighted = client.post(
        "/analyze/prioritize",
        json={"config": {"utility": {"normalization_mode": "WEIGHTED_SUM"}}},
    ).json()["result"]
    assert weighted["order"] == divided["order"]
    assert weighted["overall"]["req4"] == 2 * divided["overall"]["req4"]


def test_restart_loses_state():
    app = create_app()
    client = TestClient(app)
    client.put("/project", json=_fixture_json("keyword_match.json"))
    assert client.get("/project").status_code == 200
    fresh = TestClient(create_app())
    assert fresh.get("/project").status_code == 404


def test_analyze_without_project_is_404(client):
    assert client.post("/analyze/prioritize").status_code == 404
