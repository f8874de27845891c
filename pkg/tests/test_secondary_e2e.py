"""Protocol-level analogue of the two-session end-to-end scenario.

No browser runs in this environment, so this drives the exact HTTP/WS
surface the frontend uses: two concurrent sessions in one space, a timed
chat round trip, recommendation-click -> widget added + paradata bump,
layout surviving a reload, and the reflection profile changing right after
a manual technique assignment (no reload in between).
"""

from __future__ import annotations

import time

import pytest
from fastapi.testclient import TestClient

from srlspace.platform import Platform
from srlspace.server import create_app

from util import ticking_clock


@pytest.fixture()
def client():
    return TestClient(create_app(Platform(clock=ticking_clock())))


def login(client, learner: str):
    token = client.post("/api/login", json={"learner": learner}).json()["token"]
    return token, {"Authorization": f"Bearer {token}"}


def test_two_sessions_full_scenario(client):
    tok_d, dominik = login(client, "dominik")
    tok_m, maren = login(client, "maren")

    client.post("/api/spaces", json={"name": "quadratic-functions"}, headers=dominik)
    # maren follows the shared URL and joins
    assert client.get("/api/spaces/quadratic-functions/url").json()["url"] == "/spaces/quadratic-functions"
    client.post("/api/spaces/quadratic-functions/members", headers=maren)

    with client.websocket_connect(f"/rt?token={tok_d}&space=quadratic-functions") as ws_d:
        assert ws_d.receive_json()["kind"] == "presence"
        with client.websocket_connect(f"/rt?token={tok_m}&space=quadratic-functions") as ws_m:
            assert ws_d.receive_json()["online"] == ["dominik", "maren"]
            assert ws_m.receive_json()["kind"] == "presence"

            # chat round trip, timed
            start = time.perf_counter()
            ws_d.send_json({"kind": "chat", "text": "guess my function!"})
            echo_d = ws_d.receive_json()
            echo_m = ws_m.receive_json()
            elapsed = time.perf_counter() - start
            assert echo_d["text"] == echo_m["text"] == "guess my function!"
            assert elapsed < 1.0, f"chat round trip took {elapsed:.3f}s"

            # widgets in the same space sync over pub/sub
            ws_m.send_json({"kind": "sub", "topic": "paint.stroke"})
            ws_m.send_json({"kind": "chat", "text": "ready"})
            assert ws_m.receive_json()["text"] == "ready"
            assert ws_d.receive_json()["text"] == "ready"
            ws_d.send_json({"kind": "pub", "topic": "paint.stroke",
                            "payload": {"points": [{"x": 1, "y": 2}]}, "widget": "shared_paint"})
            stroke = ws_m.receive_json()
            assert stroke["kind"] == "pub" and stroke["payload"]["points"]

    # clicking a recommended widget adds it and bumps paradata
    recs = client.get(
        "/api/recommend/widgets", params={"entity": "goal_setting", "learner": "maren"}
    ).json()["recommendations"]
    assert recs
    top = recs[0]["item_id"]
    before = client.get(f"/api/widgets/{top}/paradata").json()["add_count"]
    accepted = client.post(
        "/api/recommend/widgets/accept",
        params={"space": "quadratic-functions"},
        json={"widget_id": top},
        headers=maren,
    ).json()
    assert client.get(f"/api/widgets/{top}/paradata").json()["add_count"] == before + 1
    view = client.get("/api/spaces/quadratic-functions", headers=maren).json()
    assert any(
        w["widget_id"] == top for a in view["activities"] for w in a["widgets"]
    )

    # layout survives a reload
    layout = {"x": 6, "y": 2, "width": 4, "height": 3}
    client.patch(
        f"/api/spaces/quadratic-functions/widgets/{accepted['instance_id']}/layout",
        json=layout, headers=dominik,
    )
    reloaded = client.get("/api/spaces/quadratic-functions", headers=dominik).json()
    stored = next(
        w for a in reloaded["activities"] for w in a["widgets"]
        if w["instance_id"] == accepted["instance_id"]
    )
    assert stored["layout"] == layout

    # the reflection chart reflects a fresh assignment without a reload
    sig = {"verb": "widget.add", "object_type": "widget", "widget": top}
    profile_before = client.get("/api/monitor/maren/profile").json()
    client.post("/api/monitor/maren/assign", json={**sig, "technique": "goal_definition"}, headers=maren)
    profile_after = client.get("/api/monitor/maren/profile").json()
    assert profile_after["counts"]["goal_setting"] > profile_before["counts"]["goal_setting"]


def test_bundle_install_adds_every_widget(client):
    _, ada = login(client, "ada")
    client.post("/api/spaces", json={"name": "reading"}, headers=ada)
    result = client.post(
        "/api/spaces/reading/bundles", json={"bundle_id": "srl_text_reader"}, headers=ada
    )
    assert result.status_code == 201
    instances = result.json()["instances"]
    assert [i["widget_id"] for i in instances] == [
        "text_reader", "self_evaluation", "content_search", "self_reflection",
    ]
    assert client.post(
        "/api/spaces/reading/bundles", json={"bundle_id": "no_such"}, headers=ada
    ).status_code == 404
