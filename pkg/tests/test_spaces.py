from __future__ import annotations

import random

import pytest

from srlspace.catalog import load_default_catalog
from srlspace.errors import (
    InvalidName,
    LastMember,
    NameTaken,
    NotAMember,
    UnknownInstance,
    UnknownSpace,
    UnknownWidget,
)
from srlspace.events import EventLog
from srlspace.spaces import Layout, SpaceService

from util import ticking_clock


@pytest.fixture()
def service(fresh_catalog):
    return SpaceService(fresh_catalog, EventLog(), clock=ticking_clock())


# -- create -------------------------------------------------------------------

def test_create_space(service):
    space = service.create_space("quadratic-functions", "dominik")
    assert space.owner == "dominik"
    assert space.members == {"dominik"}
    assert [a.name for a in space.activities] == ["Start"]


def test_duplicate_name_rejected(service):
    service.create_space("one", "a")
    with pytest.raises(NameTaken):
        service.create_space("one", "b")


def test_name_with_slash_rejected(service):
    with pytest.raises(InvalidName):
        service.create_space("bad/name", "a")


# -- membership ----------------------------------------------------------------

def test_join_keeps_owner(service):
    service.create_space("s", "a")
    space = service.join_space("s", "b")
    assert space.members == {"a", "b"}
    assert space.owner == "a"


def test_owner_leaving_transfers_to_earliest_joined(service):
    service.create_space("s", "a")
    service.join_space("s", "b")
    service.join_space("s", "c")
    space = service.leave_space("s", "a")
    assert space.owner == "b"  # seniority: b joined before c
    assert space.members == {"b", "c"}


def test_ownership_transfer_matches_seniority_oracle(service):
    rng = random.Random(3)
    service.create_space("s", "m0")
    joined = ["m0"]
    for i in range(1, 8):
        service.join_space("s", f"m{i}")
        joined.append(f"m{i}")
    # random members leave; owner must always be the earliest-joined remaining
    remaining = list(joined)
    for _ in range(6):
        leaver = rng.choice(remaining)
        remaining.remove(leaver)
        space = service.leave_space("s", leaver)
        assert space.owner == min(remaining, key=joined.index)
        assert space.owner in space.members


def test_leave_by_non_member(service):
    service.create_space("s", "a")
    with pytest.raises(NotAMember):
        service.leave_space("s", "stranger")


def test_sole_member_cannot_leave(service):
    service.create_space("s", "a")
    with pytest.raises(LastMember):
        service.leave_space("s", "a")


# -- widgets ----------------------------------------------------------------------

def test_add_widget_bumps_paradata(service):
    service.create_space("s", "a")
    before = service.catalog.widgets["to_learn_list"].add_count
    inst = service.add_widget("s", "Start", "to_learn_list", "a")
    assert inst.widget_id == "to_learn_list"
    assert service.catalog.widgets["to_learn_list"].add_count == before + 1


def test_add_same_widget_twice_gives_two_instances(service):
    service.create_space("s", "a")
    i1 = service.add_widget("s", "Start", "notepad", "a")
    i2 = service.add_widget("s", "Start", "notepad", "a")
    assert i1.instance_id != i2.instance_id
    assert service.get_space("s").instance_count() == 2


def test_add_widget_requires_membership(service):
    service.create_space("s", "a")
    with pytest.raises(NotAMember):
        service.add_widget("s", "Start", "notepad", "b")


def test_add_unknown_widget(service):
    service.create_space("s", "a")
    with pytest.raises(UnknownWidget):
        service.add_widget("s", "Start", "flux_capacitor", "a")


def test_default_layout_fills_grid_row_major(service):
    service.create_space("s", "a")
    slots = [service.add_widget("s", "Start", "notepad", "a").layout for _ in range(8)]
    assert slots[0].to_dict() == {"x": 0, "y": 0, "width": 2, "height": 2}
    assert slots[1].to_dict() == {"x": 2, "y": 0, "width": 2, "height": 2}
    # 12-unit grid: 6 default slots per row, then next row
    assert slots[6].to_dict() == {"x": 0, "y": 2, "width": 2, "height": 2}


# -- load / layout ----------------------------------------------------------------

def test_fresh_space_loaded_once(service):
    service.create_space("s", "a")
    view = service.load_space("s", "a")
    assert view["load_count"] == 1
    assert len(view["load_days"]) == 1


def test_load_counts_and_days_match_recount():
    catalog = load_default_catalog()
    day = 24 * 3600 * 1000
    # clock steps one minute per call; jump days via big offsets
    times = iter([0, 1000, 2000, 3000, day, day + 1000, day + 2000])
    service = SpaceService(catalog, EventLog(), clock=lambda: next(times))
    service.create_space("s", "a")
    for _ in range(5):
        service.load_space("s", "a")
    space = service.get_space("s")
    assert space.load_count == 5
    assert len(space.load_days) == 2


def test_layout_persists_between_loads(service):
    service.create_space("s", "a")
    inst = service.add_widget("s", "Start", "notepad", "a")
    service.set_layout("s", inst.instance_id, Layout(4, 0, 4, 3), "a")
    view = service.load_space("s", "a")
    widget = view["activities"][0]["widgets"][0]
    assert widget["layout"] == {"x": 4, "y": 0, "width": 4, "height": 3}
    assert service.load_space("s", "a")["activities"] == view["activities"]


def test_set_layout_unknown_instance(service):
    service.create_space("s", "a")
    with pytest.raises(UnknownInstance):
        service.set_layout("s", "i99", Layout(0, 0, 2, 2), "a")


def test_layout_roundtrip_equals_last_write(service):
    service.create_space("s", "a")
    inst = service.add_widget("s", "Start", "notepad", "a")
    rng = random.Random(11)
    for _ in range(10):
        layout = Layout(rng.randint(0, 9), rng.randint(0, 9), rng.randint(1, 4), rng.randint(1, 4))
        service.set_layout("s", inst.instance_id, layout, "a")
        view = service.load_space("s", "a")
        assert view["activities"][0]["widgets"][0]["layout"] == layout.to_dict()


def test_layout_rejects_zero_size():
    with pytest.raises(ValueError):
        Layout(0, 0, 0, 2)


# -- share url ---------------------------------------------------------------------

def test_share_url_canonical(service):
    service.create_space("quadratic-functions", "a")
    url = service.share_url("quadratic-functions")
    assert url == "/spaces/quadratic-functions"
    assert service.share_url("quadratic-functions") == url


def test_share_url_unknown_space(service):
    with pytest.raises(UnknownSpace):
        service.share_url("ghost")


# -- event log / replay ---------------------------------------------------------------

def _random_mutations(service, rng: random.Random, n_ops: int, learners: list[str]) -> None:
    widgets = sorted(service.catalog.widgets)
    for i in range(n_ops):
        op = rng.random()
        names = service.space_names()
        if not names or op < 0.06:
            name = f"space-{rng.randint(0, 10_000)}-{i}"
            try:
                service.create_space(name, rng.choice(learners))
            except NameTaken:
                pass
            continue
        name = rng.choice(names)
        space = service.get_space(name)
        members = sorted(space.members)
        try:
            if op < 0.18:
                service.join_space(name, rng.choice(learners))
            elif op < 0.24 and len(members) > 1:
                service.leave_space(name, rng.choice(members))
            elif op < 0.50:
                service.add_widget(name, "Start", rng.choice(widgets), rng.choice(members))
            elif op < 0.58:
                instances = [w.instance_id for a in space.activities for w in a.widgets]
                if instances:
                    service.remove_widget(name, rng.choice(instances), rng.choice(members))
            elif op < 0.72:
                instances = [w.instance_id for a in space.activities for w in a.widgets]
                if instances:
                    layout = Layout(rng.randint(0, 10), rng.randint(0, 10), rng.randint(1, 4), rng.randint(1, 4))
                    service.set_layout(name, rng.choice(instances), layout, rng.choice(members))
            elif op < 0.82:
                service.set_shared(name, f"k{rng.randint(0, 5)}", {"v": rng.randint(0, 99)}, rng.choice(members))
            else:
                service.load_space(name, rng.choice(members))
        except (NotAMember, LastMember):
            pass


def test_every_mutation_emits_exactly_one_event(service):
    service.create_space("s", "a")
    service.join_space("s", "b")
    service.add_widget("s", "Start", "notepad", "a")
    inst = service.get_space("s").activities[0].widgets[0]
    service.set_layout("s", inst.instance_id, Layout(1, 1, 2, 2), "b")
    service.load_space("s", "b")
    service.set_shared("s", "k", 1, "a")
    service.leave_space("s", "b")
    verbs = [e.verb for e in service.events.events()]
    assert verbs == [
        "space.create", "space.join", "widget.add", "widget.layout",
        "space.load", "space.store", "space.leave",
    ]


def test_idempotent_join_emits_no_event(service):
    service.create_space("s", "a")
    service.join_space("s", "b")
    n = len(service.events.events())
    service.join_space("s", "b")
    assert len(service.events.events()) == n


def test_replay_reproduces_state_on_random_sequences():
    for trial in range(10):
        rng = random.Random(trial)
        catalog = load_default_catalog()
        service = SpaceService(catalog, EventLog(), clock=ticking_clock())
        _random_mutations(service, rng, 200, ["a", "b", "c", "d"])
        replayed = SpaceService.replay_events(
            service.events.events(), load_default_catalog()
        )
        assert replayed.snapshot_all() == service.snapshot_all()
        assert replayed.catalog.paradata() == service.catalog.paradata()


def test_owner_always_member_under_random_mutations():
    rng = random.Random(99)
    service = SpaceService(load_default_catalog(), EventLog(), clock=ticking_clock())
    _random_mutations(service, rng, 300, ["a", "b", "c"])
    for name in service.space_names():
        space = service.get_space(name)
        assert space.owner in space.members


def test_paradata_equals_widget_add_event_count(service):
    service.create_space("s", "a")
    for _ in range(3):
        service.add_widget("s", "Start", "notepad", "a")
    service.add_widget("s", "Start", "web_search", "a")
    adds = [e for e in service.events.events() if e.verb == "widget.add"]
    assert service.catalog.widgets["notepad"].add_count == sum(
        1 for e in adds if e.object_id == "notepad"
    )
    assert service.catalog.widgets["web_search"].add_count == 1


def test_platform_replay_covers_learner_state_and_chat():
    import sys
    sys.path.insert(0, "tests")
    from srlspace.catalog import SrlCompetence, load_default_catalog
    from srlspace.platform import Platform

    clock = ticking_clock()
    platform = Platform(clock=clock, corpus=[])
    platform.spaces.create_space("s", "ada")
    platform.spaces.join_space("s", "ben")
    platform.spaces.add_widget("s", "Start", "text_reader", "ada")
    platform.learners.set_competence("ada", SrlCompetence("regulation", 4), "goal")
    platform.learners.record_application("ada", "tagging")
    platform.learners.set_parameter("ada", "preferred_tool", "text_reader")
    conn = platform.hub.connect("ben", "s")
    platform.hub.chat_post(conn.id, "hello ada")

    replayed = Platform.from_events(
        platform.events.events(), catalog=load_default_catalog(), corpus=[]
    )
    assert replayed.snapshot() == platform.snapshot()
