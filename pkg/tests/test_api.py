import pytest
from fastapi.testclient import TestClient

from api.main import create_app
from config.prompts import PROMPTS_VERSION
from tests.conftest import fixture_text


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as test_client:
        yield test_client


@pytest.fixture
def gripper_markup() -> str:
    return fixture_text("gripper")


@pytest.fixture
def faulty_markup() -> str:
    return fixture_text("gripper").replace('"GRIPPER": null', '"GRIPPER": null, "container": null')


def test_root(client):
    assert client.get("/").json()["status"] == "running"


def test_health(client):
    payload = client.get("/api/v1/health").json()
    assert payload["status"] == "healthy"
    assert payload["service"] == "planning-model-api"
    assert payload["prompts_version"] == PROMPTS_VERSION


def test_catalog(client):
    entries = client.get("/api/v1/catalog").json()
    assert [e["code"] for e in entries][:3] == ["WrongTypeUse", "UndeclaredParameterUse", "WrongParameter"]
    assert len(entries) == 15


def test_check_clean(client, gripper_markup):
    response = client.post("/api/v1/models/check", json={"markup": gripper_markup})
    assert response.status_code == 200
    assert response.json()["error_count"] == 0


def test_check_with_findings(client, faulty_markup):
    response = client.post("/api/v1/models/check", json={"markup": faulty_markup})
    assert response.status_code == 200
    assert response.json()["errors"][0]["location"] == "type:container"


def test_unparsable_markup_is_422(client):
    response = client.post("/api/v1/models/check", json={"markup": "{not json"})
    assert response.status_code == 422
    error = response.json()["error"]
    assert error["type"] == "markup_error"
    assert error["details"]["errors"][0]["path"] == ""


def test_missing_body_field_is_422(client):
    response = client.post("/api/v1/models/check", json={})
    assert response.status_code == 422
    assert response.json()["error"]["type"] == "validation_error"


def test_compile(client, gripper_markup):
    payload = client.post("/api/v1/models/compile", json={"markup": gripper_markup}).json()
    assert payload["domain"].startswith("(define (domain gripper)")
    assert payload["problem"].startswith("(define (problem gripper_one_ball)")


def test_compile_rejects_inconsistent_model(client, faulty_markup):
    response = client.post("/api/v1/models/compile", json={"markup": faulty_markup})
    assert response.status_code == 409
    error = response.json()["error"]
    assert error["type"] == "consistency_errors"
    assert error["details"]["counts"] == {"WrongTypeForm": 1}
    assert error["method"] == "POST"


def test_reach_with_plan(client, gripper_markup):
    plan = "(pick ball1 room_a grip_left)\n(move room_a room_b)\n(drop ball1 room_b grip_left)\n"
    payload = client.post("/api/v1/models/reach", json={"markup": gripper_markup, "plan": plan}).json()
    assert payload["goal_reachable"] is True
    assert payload["action_coverage"] == 1.0


def test_reach_with_invalid_plan(client, gripper_markup):
    response = client.post("/api/v1/models/reach", json={"markup": gripper_markup, "plan": "(move room_b room_a)"})
    assert response.status_code == 400
    assert response.json()["error"]["details"] == {"step_index": 0}


def test_reach_with_unparsable_plan(client, gripper_markup):
    response = client.post("/api/v1/models/reach", json={"markup": gripper_markup, "plan": "move room_a"})
    assert response.status_code == 400
    assert response.json()["error"]["type"] == "parse_error"


def test_plan(client, gripper_markup):
    payload = client.post("/api/v1/models/plan", json={"markup": gripper_markup}).json()
    assert payload["status"] == "solved"
    assert payload["plan"]["steps"][0] == "(pick ball1 room_a grip_left)"


def test_plan_with_tiny_limit(client, gripper_markup):
    payload = client.post("/api/v1/models/plan", json={"markup": gripper_markup, "max_expanded_states": 1}).json()
    assert payload["status"] == "resources-exhausted"


def test_plan_rejects_non_positive_limit(client, gripper_markup):
    response = client.post("/api/v1/models/plan", json={"markup": gripper_markup, "max_expanded_states": 0})
    assert response.status_code == 422
