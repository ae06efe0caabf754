"""HTTP service surface, exercised through the test client."""

import os

import pytest
from fastapi.testclient import TestClient

from epigraph.graph import load_eg
from epigraph.lang import RestrictedValueSet
from epigraph.service import build_app

PI20 = RestrictedValueSet.parse("0,0.05,...,1")
PI3 = RestrictedValueSet.parse("0,0.5,1")


@pytest.fixture(scope="module")
def dental_client(graphs_dir):
    eg = load_eg(os.path.join(graphs_dir, "dental.eg"))
    return TestClient(build_app(eg, PI20))


@pytest.fixture(scope="module")
def party_client(graphs_dir):
    eg = load_eg(os.path.join(graphs_dir, "party.eg"))
    return TestClient(build_app(eg, PI3))


# ---------------------------------------------------------------------------
# graph and query endpoints

def test_get_graph(dental_client):
    r = dental_client.get("/graph")
    assert r.status_code == 200
    body = r.json()
    assert len(body["arguments"]) == 9
    assert body["pi"][:3] == ["0", "1/20", "1/10"]


def test_query_entail(party_client):
    r = party_client.post("/query/entail", json={"query": "p(F) > 0.5"})
    assert r.status_code == 200
    assert r.json() == {"holds": True}
    r = party_client.post("/query/entail", json={"query": "p(A) > 0.5"})
    body = r.json()
    assert body["holds"] is False and "witness" in body


def test_query_sat_with_filters(party_client):
    r = party_client.post("/query/sat", json={"filters": ["ternary"]})
    assert r.status_code == 200
    assert r.json()["count"] == 93
    r = party_client.post(
        "/query/sat", json={"filters": ["ternary"], "extra": ["p(A) > 0.5"]})
    assert 0 < r.json()["count"] < 93


def test_query_semantics(party_client):
    r = party_client.post("/query/semantics",
                          json={"order": "B", "direction": "max",
                                "filters": ["ternary"]})
    assert r.status_code == 200
    assert r.json()["count"] >= 1


def test_query_relation_type(party_client):
    r = party_client.post("/query/relation-type",
                          json={"rel": ["B", "A"], "probe": ["B", "C", "D"]})
    assert r.status_code == 200
    assert r.json() == {"types": ["supporting"], "strong": ["supporting"]}


def test_query_errors_are_400(party_client):
    assert party_client.post("/query/entail",
                             json={"query": "p(A >"}).status_code == 400
    assert party_client.post("/query/sat",
                             json={"filters": ["bogus"]}).status_code == 400
    assert party_client.post("/query/coverage",
                             json={"arg": "Z"}).status_code == 400
    assert party_client.post("/query/relation-type",
                             json={"rel": ["A"]}).status_code == 400
    assert party_client.post("/query/semantics",
                             json={"order": "Q"}).status_code == 400


# ---------------------------------------------------------------------------
# dialogue sessions

def test_session_lifecycle(dental_client):
    r = dental_client.post("/session", json={"goal": "A"})
    assert r.status_code == 201
    sid = r.json()["id"]
    assert r.json()["consistent"] is True

    r = dental_client.post(f"/session/{sid}/assert",
                           json={"arg": "F", "cmp": ">", "x": "0.5"})
    assert r.status_code == 200
    state = r.json()
    assert state["ranges"]["A"] == {"min": "17/20", "max": "1"}
    assert state["ranges"]["B"] == {"min": "7/10", "max": "1"}
    assert state["asserted"]["F"] == {"comparator": ">", "value": "1/2"}

    r = dental_client.get(f"/session/{sid}/state")
    assert r.json()["ranges"]["A"]["min"] == "17/20"

    r = dental_client.delete(f"/session/{sid}/assert/F")
    assert r.status_code == 200
    assert r.json()["asserted"] == {}
    assert [h["action"] for h in r.json()["history"]] == ["assert", "retract"]


def test_goal_ceiling_via_service(dental_client):
    sid = dental_client.post("/session", json={"goal": "C"}).json()["id"]
    r = dental_client.post(f"/session/{sid}/assert",
                           json={"arg": "G", "cmp": "=", "x": "0.6"})
    assert r.json()["ranges"]["C"] == {"min": "0", "max": "2/5"}


def test_session_moves(dental_client):
    sid = dental_client.post("/session", json={}).json()["id"]   # goal A
    r = dental_client.get(f"/session/{sid}/moves")
    assert r.status_code == 200
    body = r.json()
    assert body["consistent"] is True
    assert [m["argument"] for m in body["moves"][:2]] == ["F", "B"]
    first = body["moves"][0]
    assert first == {"argument": "F", "feasible": True, "optimistic": "1",
                     "pessimistic": "17/20", "warnings": []}


def test_session_conflict(dental_client):
    sid = dental_client.post("/session", json={"goal": "A"}).json()["id"]
    dental_client.post(f"/session/{sid}/assert",
                       json={"arg": "F", "cmp": ">", "x": "1/2"})
    r = dental_client.post(f"/session/{sid}/assert",
                           json={"arg": "B", "cmp": "<", "x": "1/2"})
    state = r.json()
    assert state["consistent"] is False
    assert sorted(c["arg"] for c in state["conflict"]) == ["B", "F"]
    moves = dental_client.get(f"/session/{sid}/moves").json()
    assert moves["consistent"] is False and moves["moves"] == []


def test_session_errors(dental_client):
    assert dental_client.get("/session/999/state").status_code == 404
    assert dental_client.post("/session",
                              json={"goal": "Z"}).status_code == 400
    sid = dental_client.post("/session", json={"goal": "A"}).json()["id"]
    bad = [{"arg": "A", "cmp": "?", "x": "0.5"},
           {"arg": "A", "cmp": ">", "x": "x"},
           {"arg": "Z", "cmp": ">", "x": "0.5"}]
    for body in bad:
        assert dental_client.post(f"/session/{sid}/assert",
                                  json=body).status_code == 400
