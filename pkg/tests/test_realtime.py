from __future__ import annotations

import random

import pytest

from srlspace.errors import ConnectionClosed, EmptyMessage, NotAMember
from srlspace.events import EventLog
from srlspace.realtime import RealtimeHub

from util import ticking_clock

MEMBERS = {
    "alpha": {"ann", "ben", "chloe"},
    "beta": {"ann", "dana"},
    "gamma": {"ben"},
}


@pytest.fixture()
def hub():
    log = EventLog()
    hub = RealtimeHub(lambda space: MEMBERS.get(space, set()), emit=log.append, clock=ticking_clock())
    hub.event_log = log  # test hook
    return hub


def pubs(connection):
    return [f for f in connection.drain() if f["kind"] == "pub"]


# -- presence -------------------------------------------------------------------

def test_first_connect_sets_presence(hub):
    hub.connect("ann", "alpha")
    assert hub.presence("alpha") == {"ann"}


def test_non_member_cannot_connect(hub):
    with pytest.raises(NotAMember):
        hub.connect("dana", "alpha")


def test_two_tabs_one_disconnect_still_online(hub):
    c1 = hub.connect("ann", "alpha")
    c2 = hub.connect("ann", "alpha")
    hub.disconnect(c1.id)
    assert hub.presence("alpha") == {"ann"}
    hub.disconnect(c2.id)
    assert hub.presence("alpha") == set()


def test_presence_matches_refcount_oracle(hub):
    rng = random.Random(5)
    open_conns: dict[str, list] = {"ann": [], "ben": [], "chloe": []}
    for _ in range(200):
        learner = rng.choice(list(open_conns))
        if open_conns[learner] and rng.random() < 0.5:
            conn = open_conns[learner].pop()
            hub.disconnect(conn.id)
        else:
            open_conns[learner].append(hub.connect(learner, "alpha"))
    expected = {l for l, conns in open_conns.items() if conns}
    assert hub.presence("alpha") == expected


def test_presence_change_is_broadcast(hub):
    c1 = hub.connect("ann", "alpha")
    hub.connect("ben", "alpha")
    frames = [f for f in c1.drain() if f["kind"] == "presence"]
    assert frames[-1]["online"] == ["ann", "ben"]


# -- pub/sub --------------------------------------------------------------------------

def test_publish_reaches_same_space_subscriber(hub):
    a = hub.connect("ann", "alpha")
    b = hub.connect("ben", "alpha")
    hub.subscribe(b.id, "paint.stroke")
    hub.publish(a.id, "paint.stroke", {"x": 1, "y": 2})
    frames = pubs(b)
    assert len(frames) == 1
    assert frames[0]["payload"] == {"x": 1, "y": 2}


def test_same_topic_other_space_receives_nothing(hub):
    a = hub.connect("ann", "alpha")
    d = hub.connect("dana", "beta")
    hub.subscribe(d.id, "paint.stroke")
    hub.publish(a.id, "paint.stroke", {"x": 1})
    assert pubs(d) == []


def test_publisher_does_not_hear_itself_by_default(hub):
    a = hub.connect("ann", "alpha")
    hub.subscribe(a.id, "topic")
    hub.publish(a.id, "topic", {"n": 1})
    assert pubs(a) == []


def test_receive_own_opt_in(hub):
    a = hub.connect("ann", "alpha")
    hub.subscribe(a.id, "topic", receive_own=True)
    hub.publish(a.id, "topic", {"n": 1})
    assert len(pubs(a)) == 1


def test_hundred_messages_arrive_in_seq_order(hub):
    a = hub.connect("ann", "alpha")
    b = hub.connect("ben", "alpha")
    hub.subscribe(b.id, "stream")
    for i in range(100):
        hub.publish(a.id, "stream", {"i": i})
    frames = pubs(b)
    assert [f["seq"] for f in frames] == list(range(1, 101))
    assert [f["payload"]["i"] for f in frames] == list(range(100))


def test_seq_is_per_publisher_per_topic(hub):
    a = hub.connect("ann", "alpha")
    hub.publish(a.id, "t1", {})
    hub.publish(a.id, "t1", {})
    seq_t2 = hub.publish(a.id, "t2", {})
    assert seq_t2 == 1


def test_publish_on_closed_connection(hub):
    a = hub.connect("ann", "alpha")
    hub.disconnect(a.id)
    with pytest.raises(ConnectionClosed):
        hub.publish(a.id, "topic", {})


def test_publish_logs_an_event(hub):
    a = hub.connect("ann", "alpha")
    hub.publish(a.id, "tag.add", {"tag": "kings"}, source_widget="text_reader")
    events = [e for e in hub.event_log.events() if e.verb == "iwc.publish"]
    assert len(events) == 1
    assert events[0].object_type == "tag.add"
    assert events[0].details["widget"] == "text_reader"


# -- chat ----------------------------------------------------------------------------------

def test_chat_broadcast_to_all_online_members(hub):
    conns = [hub.connect(l, "alpha") for l in ("ann", "ben", "chloe")]
    for c in conns:
        c.drain()
    hub.chat_post(conns[0].id, "hello all")
    for c in conns:
        chats = [f for f in c.drain() if f["kind"] == "chat"]
        assert [f["text"] for f in chats] == ["hello all"]


def test_chat_history_limit_returns_last_in_order(hub):
    a = hub.connect("ann", "alpha")
    for i in range(5):
        hub.chat_post(a.id, f"message {i}")
    history = hub.chat_history("alpha", limit=2)
    assert [m.text for m in history] == ["message 3", "message 4"]
    # replay oracle: full history equals the chat.post event sequence
    logged = [e.details["text"] for e in hub.event_log.events() if e.verb == "chat.post"]
    assert [m.text for m in hub.chat_history("alpha")] == logged


def test_empty_chat_message_rejected(hub):
    a = hub.connect("ann", "alpha")
    with pytest.raises(EmptyMessage):
        hub.chat_post(a.id, "   ")


# -- isolation fuzz -----------------------------------------------------------------------

def test_no_cross_space_delivery_under_fuzz(hub):
    rng = random.Random(17)
    conns = []
    for space, members in MEMBERS.items():
        for learner in sorted(members):
            conn = hub.connect(learner, space)
            hub.subscribe(conn.id, "shared.topic", receive_own=False)
            conns.append(conn)
    for c in conns:
        c.drain()
    for _ in range(500):
        sender = rng.choice(conns)
        hub.publish(sender.id, "shared.topic", {"from": sender.id, "space": sender.space})
    for c in conns:
        for frame in pubs(c):
            assert frame["space"] == c.space
            assert frame["payload"]["space"] == c.space
