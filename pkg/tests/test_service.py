import json

import pytest
from fastapi.testclient import TestClient

from hurry_prover.service import app


@pytest.fixture()
def client():
    return TestClient(app)


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_session_lifecycle(client):
    sid = client.post("/sessions").json()["session_id"]
    r = client.post(f"/sessions/{sid}/request",
                    json={"id": 1, "op": "exec", "payload": "Check (3+4)."})
    body = r.json()
    assert body["id"] == 1 and body["status"] == "ok"
    assert body["output"] == "3 + 4 : nat"
    assert client.delete(f"/sessions/{sid}").json() == {"status": "ok"}
    assert client.post(f"/sessions/{sid}/request",
                       json={"id": 2, "op": "goals"}).status_code == 404


def test_sessions_are_isolated(client):
    s1 = client.post("/sessions").json()["session_id"]
    s2 = client.post("/sessions").json()["session_id"]
    client.post(f"/sessions/{s1}/request",
                json={"id": 1, "op": "exec", "payload": "Definition only1 := 3."})
    r = client.post(f"/sessions/{s2}/request",
                    json={"id": 2, "op": "exec", "payload": "Check only1."})
    assert r.json()["status"] == "error"


def test_websocket_session(client):
    with client.websocket_connect("/ws") as ws:
        ws.send_text(json.dumps({"id": 1, "op": "exec",
                                 "payload": "Theorem t : True /\\ True."}))
        first = json.loads(ws.receive_text())
        assert first["status"] == "ok" and len(first["goals"]) == 1
        ws.send_text(json.dumps({"id": 2, "op": "exec", "payload": "split."}))
        second = json.loads(ws.receive_text())
        assert len(second["goals"]) == 2
        ws.send_text(json.dumps({"id": 3, "op": "back", "payload": "0"}))
        third = json.loads(ws.receive_text())
        assert third["status"] == "ok" and third["goals"] == []


def test_error_response_carries_position(client):
    sid = client.post("/sessions").json()["session_id"]
    r = client.post(f"/sessions/{sid}/request",
                    json={"id": 7, "op": "exec", "payload": "Check (3=5"})
    body = r.json()
    assert body["status"] == "error" and body["id"] == 7
    assert body["error"]["message"]
